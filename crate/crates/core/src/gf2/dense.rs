use crate::error::{Error, Result};
use crate::gf2::matrix::BinaryMatrix;
use crate::gf2::vector::{words_for, BinaryVector, WORD_BITS};

/// Dense bit-packed matrix used for elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let w = &mut self.data[r * self.stride + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row_vector(&self, r: usize) -> BinaryVector {
        BinaryVector::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    /// `row[dst] ^= row[src]` for words `from_word..`.
    #[inline]
    fn xor_row(&mut self, src: usize, dst: usize, from_word: usize) {
        debug_assert_ne!(src, dst);
        let s = self.stride;
        let (src_off, dst_off) = (src * s, dst * s);
        for w in from_word..s {
            let v = self.data[src_off + w];
            self.data[dst_off + w] ^= v;
        }
    }

    pub fn to_sparse(&self) -> BinaryMatrix {
        let row_lists = (0..self.rows)
            .map(|r| self.row_vector(r).support())
            .collect();
        BinaryMatrix::from_sorted_rows(self.rows, self.cols, row_lists)
    }

    /// Reduces to reduced row echelon form in place and returns the pivot columns,
    /// one per nonzero row, in order. Pivots are the first nonzero column at each step.
    pub fn rref(&mut self) -> Vec<usize> {
        self.rref_with(None, self.cols)
    }

    /// As [`BitMatrix::rref`] with pivots restricted to columns `< pivot_limit`.
    pub fn rref_prefix(&mut self, pivot_limit: usize) -> Vec<usize> {
        self.rref_with(None, pivot_limit.min(self.cols))
    }

    /// Elimination restricted to pivots in columns `< pivot_limit`; the same row
    /// operations are applied to `companion` when given.
    fn rref_with(&mut self, mut companion: Option<&mut BitMatrix>, pivot_limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..pivot_limit {
            if rank == self.rows {
                break;
            }
            let word = col / WORD_BITS;
            let mask = 1u64 << (col % WORD_BITS);
            let Some(p) = (rank..self.rows).find(|&r| self.data[r * self.stride + word] & mask != 0)
            else {
                continue;
            };
            self.swap_rows(rank, p);
            if let Some(c) = companion.as_deref_mut() {
                c.swap_rows(rank, p);
            }
            for r in 0..self.rows {
                if r != rank && self.data[r * self.stride + word] & mask != 0 {
                    self.xor_row(rank, r, word);
                    if let Some(c) = companion.as_deref_mut() {
                        c.xor_row(rank, r, 0);
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn kernel_basis(&self) -> BinaryMatrix {
        let mut m = self.clone();
        let pivots = m.rref();
        kernel_from_rref(&m, &pivots)
    }
}

pub(crate) fn kernel_from_rref(r: &BitMatrix, pivots: &[usize]) -> BinaryMatrix {
    let mut is_pivot = vec![false; r.cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let mut rows = Vec::new();
    for f in (0..r.cols).filter(|&c| !is_pivot[c]) {
        let mut list = vec![f];
        for (i, &p) in pivots.iter().enumerate() {
            if r.get(i, f) {
                list.push(p);
            }
        }
        list.sort_unstable();
        rows.push(list);
    }
    BinaryMatrix::from_sorted_rows(rows.len(), r.cols, rows)
}

/// Cached elimination of a fixed matrix `A`, supporting repeated solves of `A x = b`.
///
/// Keeps the RREF `R` and the row transform `T` with `T A = R`.
#[derive(Clone, Debug)]
pub struct Solver {
    rref: BitMatrix,
    transform: BitMatrix,
    pivots: Vec<usize>,
}

impl Solver {
    pub fn new(a: &BinaryMatrix) -> Self {
        let mut rref = a.to_dense();
        let mut transform = BitMatrix::zeros(a.rows(), a.rows());
        for i in 0..a.rows() {
            transform.set(i, i, true);
        }
        let pivots = rref.rref_with(Some(&mut transform), a.cols());
        Self {
            rref,
            transform,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> usize {
        self.rref.rows()
    }

    pub fn cols(&self) -> usize {
        self.rref.cols()
    }

    /// `T b`; the first `rank` entries give pivot values, the rest must vanish for consistency.
    fn transformed(&self, b: &BinaryVector) -> BinaryVector {
        let mut out = BinaryVector::zeros(self.rows());
        for i in 0..self.rows() {
            let parity = self
                .transform
                .row_words(i)
                .iter()
                .zip(b.words())
                .fold(0u32, |acc, (x, y)| acc ^ (x & y).count_ones());
            if parity & 1 == 1 {
                out.set(i, true);
            }
        }
        out
    }

    pub fn in_image(&self, b: &BinaryVector) -> bool {
        assert_eq!(b.len(), self.rows());
        let y = self.transformed(b);
        y.iter_support().all(|i| i < self.rank())
    }

    /// A solution of `A x = b` with all free variables zero, or `None` if `b` is not in the image.
    pub fn solve(&self, b: &BinaryVector) -> Option<BinaryVector> {
        assert_eq!(b.len(), self.rows());
        let y = self.transformed(b);
        let mut x = BinaryVector::zeros(self.cols());
        for i in y.iter_support() {
            if i >= self.rank() {
                return None;
            }
            x.set(self.pivots[i], true);
        }
        Some(x)
    }

    pub fn try_solve(&self, b: &BinaryVector) -> Result<BinaryVector> {
        if b.len() != self.rows() {
            return Err(Error::LengthMismatch {
                op: "solve",
                expected: self.rows(),
                got: b.len(),
            });
        }
        self.solve(b).ok_or(Error::SyndromeNotInImage)
    }

    pub fn kernel_basis(&self) -> BinaryMatrix {
        kernel_from_rref(&self.rref, &self.pivots)
    }

    /// Rows of `T` past the rank: a basis of the left null space of `A`.
    pub fn left_kernel_basis(&self) -> BinaryMatrix {
        let rows = (self.rank()..self.rows())
            .map(|i| self.transform.row_vector(i).support())
            .collect::<Vec<_>>();
        BinaryMatrix::from_sorted_rows(rows.len(), self.rows(), rows)
    }
}

/// Incremental basis of a row space, kept in reduced form for membership tests.
#[derive(Clone, Debug)]
pub struct RowSpace {
    len: usize,
    // (pivot, row) with each row reduced against all earlier pivots and vice versa.
    basis: Vec<(usize, BinaryVector)>,
}

impl RowSpace {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            basis: Vec::new(),
        }
    }

    pub fn from_matrix(m: &BinaryMatrix) -> Self {
        let mut s = Self::new(m.cols());
        for r in 0..m.rows() {
            s.insert(&m.row_vector(r));
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn reduce(&self, v: &BinaryVector) -> BinaryVector {
        assert_eq!(v.len(), self.len);
        let mut out = v.clone();
        for (p, row) in &self.basis {
            if out.get(*p) {
                out ^= row;
            }
        }
        out
    }

    pub fn contains(&self, v: &BinaryVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns false if it was already contained.
    pub fn insert(&mut self, v: &BinaryVector) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.iter_support().next() else {
            return false;
        };
        for (_, row) in self.basis.iter_mut() {
            if row.get(p) {
                *row ^= &r;
            }
        }
        self.basis.push((p, r));
        true
    }

    pub fn basis_matrix(&self) -> BinaryMatrix {
        let rows: Vec<BinaryVector> = self.basis.iter().map(|(_, r)| r.clone()).collect();
        BinaryMatrix::from_vectors(self.len, &rows).expect("basis rows share a length")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(BinaryMatrix::identity(5).rank(), 5);
        let dup = BinaryMatrix::from_bitstrings(&["1100", "1100", "0011"]).unwrap();
        assert_eq!(dup.rank(), 2);
        assert_eq!(BinaryMatrix::zeros(3, 4).rank(), 0);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(BinaryMatrix::identity(4).kernel_basis().rows(), 0);
        let rep = BinaryMatrix::from_bitstrings(&["110", "011"]).unwrap();
        assert_eq!(rep.kernel_basis().to_bitstrings(), vec!["111"]);
        let z = BinaryMatrix::zeros(2, 3).kernel_basis();
        assert_eq!(z.to_bitstrings(), vec!["100", "010", "001"]);
    }

    #[test]
    fn solver_round_trip() {
        let a = BinaryMatrix::from_bitstrings(&["1100", "0110", "1010"]).unwrap();
        let s = Solver::new(&a);
        assert_eq!(s.rank(), 2);
        let x = BinaryVector::from_bitstring("1001").unwrap();
        let b = a.mul_vec(&x);
        let sol = s.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&sol), b);
        let bad = BinaryVector::from_bitstring("100").unwrap();
        assert!(s.solve(&bad).is_none());
        assert!(!s.in_image(&bad));
        let left = s.left_kernel_basis();
        assert_eq!(left.rows(), 1);
        assert!(left.matmul(&a).unwrap().is_zero());
    }

    #[test]
    fn row_space_membership() {
        let m = BinaryMatrix::from_bitstrings(&["1100", "0110"]).unwrap();
        let rs = RowSpace::from_matrix(&m);
        assert_eq!(rs.dim(), 2);
        assert!(rs.contains(&BinaryVector::from_bitstring("1010").unwrap()));
        assert!(!rs.contains(&BinaryVector::from_bitstring("0001").unwrap()));
    }
}
