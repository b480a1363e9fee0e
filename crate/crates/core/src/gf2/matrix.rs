use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::dense::BitMatrix;
use crate::gf2::vector::BinaryVector;

/// Sparse matrix over GF(2), stored as sorted row lists with a cached column view.
///
/// Immutable once built. Entries are the positions of ones; addition is XOR.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    row_lists: Vec<Vec<usize>>,
    col_lists: Vec<Vec<usize>>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            row_lists: vec![Vec::new(); rows],
            col_lists: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let row_lists = (0..n).map(|i| vec![i]).collect();
        Self::from_sorted_rows(n, n, row_lists)
    }

    /// Builds a matrix from `(row, col)` pairs. Out-of-range and repeated pairs are rejected.
    pub fn from_entries(rows: usize, cols: usize, entries: &[(usize, usize)]) -> Result<Self> {
        let mut row_lists = vec![Vec::new(); rows];
        for &(r, c) in entries {
            if r >= rows || c >= cols {
                return Err(Error::IndexOutOfRange {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            row_lists[r].push(c);
        }
        Self::from_row_lists(cols, row_lists)
    }

    /// Builds a matrix from per-row column lists (any order, no duplicates).
    pub fn from_row_lists(cols: usize, mut row_lists: Vec<Vec<usize>>) -> Result<Self> {
        let rows = row_lists.len();
        for (r, list) in row_lists.iter_mut().enumerate() {
            list.sort_unstable();
            for w in list.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::DuplicateEntry { row: r, col: w[0] });
                }
            }
            if let Some(&c) = list.last() {
                if c >= cols {
                    return Err(Error::IndexOutOfRange {
                        row: r,
                        col: c,
                        rows,
                        cols,
                    });
                }
            }
        }
        Ok(Self::from_sorted_rows(rows, cols, row_lists))
    }

    /// Rows given as `0`/`1` strings, e.g. `["110", "011"]`.
    pub fn from_bitstrings(rows: &[&str]) -> Result<Self> {
        let vecs = rows
            .iter()
            .map(|s| BinaryVector::from_bitstring(s))
            .collect::<Result<Vec<_>>>()?;
        let cols = vecs.first().map_or(0, |v| v.len());
        Self::from_vectors(cols, &vecs)
    }

    pub fn from_vectors(cols: usize, vecs: &[BinaryVector]) -> Result<Self> {
        let mut row_lists = Vec::with_capacity(vecs.len());
        for v in vecs {
            if v.len() != cols {
                return Err(Error::LengthMismatch {
                    op: "matrix from rows",
                    expected: cols,
                    got: v.len(),
                });
            }
            row_lists.push(v.support());
        }
        Ok(Self::from_sorted_rows(vecs.len(), cols, row_lists))
    }

    pub(crate) fn from_sorted_rows(rows: usize, cols: usize, row_lists: Vec<Vec<usize>>) -> Self {
        debug_assert_eq!(row_lists.len(), rows);
        let mut col_lists = vec![Vec::new(); cols];
        for (r, list) in row_lists.iter().enumerate() {
            for &c in list {
                col_lists[c].push(r);
            }
        }
        Self {
            rows,
            cols,
            row_lists,
            col_lists,
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Sorted column indices of row `r`.
    #[inline]
    pub fn row(&self, r: usize) -> &[usize] {
        &self.row_lists[r]
    }

    /// Sorted row indices of column `c`.
    #[inline]
    pub fn col(&self, c: usize) -> &[usize] {
        &self.col_lists[c]
    }

    pub fn row_lists(&self) -> &[Vec<usize>] {
        &self.row_lists
    }

    pub fn col_lists(&self) -> &[Vec<usize>] {
        &self.col_lists
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_lists[r].len()
    }

    pub fn col_weight(&self, c: usize) -> usize {
        self.col_lists[c].len()
    }

    pub fn max_row_weight(&self) -> usize {
        self.row_lists.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_col_weight(&self) -> usize {
        self.col_lists.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn nnz(&self) -> usize {
        self.row_lists.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.row_lists[r].binary_search(&c).is_ok()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.row_lists
            .iter()
            .enumerate()
            .flat_map(|(r, list)| list.iter().map(move |&c| (r, c)))
    }

    pub fn row_vector(&self, r: usize) -> BinaryVector {
        let mut v = BinaryVector::zeros(self.cols);
        for &c in &self.row_lists[r] {
            v.set(c, true);
        }
        v
    }

    pub fn transpose(&self) -> BinaryMatrix {
        Self {
            rows: self.cols,
            cols: self.rows,
            row_lists: self.col_lists.clone(),
            col_lists: self.row_lists.clone(),
        }
    }

    pub fn matvec(&self, v: &BinaryVector) -> Result<BinaryVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "matvec",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: v.len(),
                right_cols: 1,
            });
        }
        Ok(self.mul_vec(v))
    }

    /// Unchecked `matvec`; walks the support of `v` through the column lists.
    pub fn mul_vec(&self, v: &BinaryVector) -> BinaryVector {
        debug_assert_eq!(v.len(), self.cols);
        let mut out = BinaryVector::zeros(self.rows);
        for c in v.iter_support() {
            for &r in &self.col_lists[c] {
                out.flip(r);
            }
        }
        out
    }

    /// `v^T M` for a vector indexed by rows.
    pub fn left_mul_vec(&self, v: &BinaryVector) -> BinaryVector {
        debug_assert_eq!(v.len(), self.rows);
        let mut out = BinaryVector::zeros(self.cols);
        for r in v.iter_support() {
            for &c in &self.row_lists[r] {
                out.flip(c);
            }
        }
        out
    }

    pub fn matmul(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.cols != other.rows {
            return Err(self.mismatch("matmul", other));
        }
        let mut acc = BinaryVector::zeros(other.cols);
        let mut row_lists = Vec::with_capacity(self.rows);
        for list in &self.row_lists {
            for &k in list {
                for &c in &other.row_lists[k] {
                    acc.flip(c);
                }
            }
            let support = acc.support();
            for &c in &support {
                acc.set(c, false);
            }
            row_lists.push(support);
        }
        Ok(Self::from_sorted_rows(self.rows, other.cols, row_lists))
    }

    pub fn add(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.shape() != other.shape() {
            return Err(self.mismatch("add", other));
        }
        let row_lists = self
            .row_lists
            .iter()
            .zip(&other.row_lists)
            .map(|(a, b)| symmetric_difference(a, b))
            .collect();
        Ok(Self::from_sorted_rows(self.rows, self.cols, row_lists))
    }

    fn mismatch(&self, op: &'static str, other: &BinaryMatrix) -> Error {
        Error::DimensionMismatch {
            op,
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }

    pub fn to_dense(&self) -> BitMatrix {
        let mut d = BitMatrix::zeros(self.rows, self.cols);
        for (r, list) in self.row_lists.iter().enumerate() {
            for &c in list {
                d.set(r, c, true);
            }
        }
        d
    }

    pub fn rank(&self) -> usize {
        self.to_dense().rank()
    }

    /// Basis of `{v : M v = 0}`, one vector per row of the result.
    pub fn kernel_basis(&self) -> BinaryMatrix {
        self.to_dense().kernel_basis()
    }

    /// Basis of `{y : y^T M = 0}`.
    pub fn left_kernel_basis(&self) -> BinaryMatrix {
        self.transpose().kernel_basis()
    }

    /// Kronecker product. Entry `(i*rows(B) + k, j*cols(B) + l)` is `A[i,j] * B[k,l]`,
    /// so the left factor is the slow index.
    pub fn tensor_product(a: &BinaryMatrix, b: &BinaryMatrix) -> Result<BinaryMatrix> {
        let rows = a
            .rows
            .checked_mul(b.rows)
            .ok_or(Error::Overflow("tensor product rows"))?;
        let cols = a
            .cols
            .checked_mul(b.cols)
            .ok_or(Error::Overflow("tensor product columns"))?;
        let mut row_lists = Vec::with_capacity(rows);
        for i in 0..a.rows {
            for k in 0..b.rows {
                let mut list = Vec::with_capacity(a.row_lists[i].len() * b.row_lists[k].len());
                for &j in &a.row_lists[i] {
                    for &l in &b.row_lists[k] {
                        list.push(j * b.cols + l);
                    }
                }
                row_lists.push(list);
            }
        }
        Ok(Self::from_sorted_rows(rows, cols, row_lists))
    }

    /// Assembles a block matrix. `None` is a zero block whose size is taken from
    /// the other blocks in its block row and block column.
    pub fn block_compose(grid: &[Vec<Option<&BinaryMatrix>>]) -> Result<BinaryMatrix> {
        let nbr = grid.len();
        if nbr == 0 {
            return Ok(BinaryMatrix::zeros(0, 0));
        }
        let nbc = grid[0].len();
        if grid.iter().any(|row| row.len() != nbc) {
            return Err(Error::BlockShape("ragged block grid".into()));
        }
        let mut heights: Vec<Option<usize>> = vec![None; nbr];
        let mut widths: Vec<Option<usize>> = vec![None; nbc];
        for (bi, row) in grid.iter().enumerate() {
            for (bj, block) in row.iter().enumerate() {
                if let Some(m) = block {
                    check_dim(&mut heights[bi], m.rows, "height", bi, bj)?;
                    check_dim(&mut widths[bj], m.cols, "width", bi, bj)?;
                }
            }
        }
        let heights = resolve_dims(heights, "block row")?;
        let widths = resolve_dims(widths, "block column")?;
        Self::block_compose_sized(grid, &heights, &widths)
    }

    /// Like [`block_compose`](Self::block_compose) with explicit block sizes, which
    /// allows all-zero block rows or columns.
    pub fn block_compose_sized(
        grid: &[Vec<Option<&BinaryMatrix>>],
        heights: &[usize],
        widths: &[usize],
    ) -> Result<BinaryMatrix> {
        if grid.len() != heights.len() || grid.iter().any(|r| r.len() != widths.len()) {
            return Err(Error::BlockShape("grid does not match block sizes".into()));
        }
        let col_offsets = offsets(widths);
        let total_cols: usize = widths.iter().sum();
        let mut row_lists = Vec::with_capacity(heights.iter().sum());
        for (bi, row) in grid.iter().enumerate() {
            for (bj, block) in row.iter().enumerate() {
                if let Some(m) = block {
                    if m.rows != heights[bi] || m.cols != widths[bj] {
                        return Err(Error::BlockShape(format!(
                            "block ({bi}, {bj}) is {}x{}, expected {}x{}",
                            m.rows, m.cols, heights[bi], widths[bj]
                        )));
                    }
                }
            }
            for r in 0..heights[bi] {
                let mut list = Vec::new();
                for (bj, block) in row.iter().enumerate() {
                    if let Some(m) = block {
                        list.extend(m.row_lists[r].iter().map(|&c| c + col_offsets[bj]));
                    }
                }
                row_lists.push(list);
            }
        }
        Ok(Self::from_sorted_rows(
            heights.iter().sum(),
            total_cols,
            row_lists,
        ))
    }

    /// Extracts block `(bi, bj)` of a block matrix with the given block sizes.
    pub fn block_extract(
        &self,
        heights: &[usize],
        widths: &[usize],
        bi: usize,
        bj: usize,
    ) -> Result<BinaryMatrix> {
        if heights.iter().sum::<usize>() != self.rows || widths.iter().sum::<usize>() != self.cols
        {
            return Err(Error::BlockShape(format!(
                "block sizes do not tile a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if bi >= heights.len() || bj >= widths.len() {
            return Err(Error::BlockShape(format!("block ({bi}, {bj}) out of range")));
        }
        let r0 = offsets(heights)[bi];
        let c0 = offsets(widths)[bj];
        Ok(self.submatrix(r0, heights[bi], c0, widths[bj]))
    }

    pub fn submatrix(&self, r0: usize, nrows: usize, c0: usize, ncols: usize) -> BinaryMatrix {
        let row_lists = (r0..r0 + nrows)
            .map(|r| {
                self.row_lists[r]
                    .iter()
                    .filter(|&&c| c >= c0 && c < c0 + ncols)
                    .map(|&c| c - c0)
                    .collect()
            })
            .collect();
        Self::from_sorted_rows(nrows, ncols, row_lists)
    }

    pub fn select_rows(&self, rows: &[usize]) -> BinaryMatrix {
        let row_lists = rows.iter().map(|&r| self.row_lists[r].clone()).collect();
        Self::from_sorted_rows(rows.len(), self.cols, row_lists)
    }

    /// Keeps the listed columns, renumbered in the order given.
    pub fn select_cols(&self, cols: &[usize]) -> BinaryMatrix {
        self.transpose().select_rows(cols).transpose()
    }

    pub fn hstack(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.rows != other.rows {
            return Err(self.mismatch("hstack", other));
        }
        Self::block_compose_sized(
            &[vec![Some(self), Some(other)]],
            &[self.rows],
            &[self.cols, other.cols],
        )
    }

    pub fn vstack(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.cols != other.cols {
            return Err(self.mismatch("vstack", other));
        }
        Self::block_compose_sized(
            &[vec![Some(self)], vec![Some(other)]],
            &[self.rows, other.rows],
            &[self.cols],
        )
    }

    pub fn to_bitstrings(&self) -> Vec<String> {
        (0..self.rows)
            .map(|r| self.row_vector(r).to_bitstring())
            .collect()
    }
}

fn check_dim(slot: &mut Option<usize>, value: usize, what: &str, bi: usize, bj: usize) -> Result<()> {
    match *slot {
        Some(v) if v != value => Err(Error::BlockShape(format!(
            "block ({bi}, {bj}) has {what} {value}, expected {v}"
        ))),
        _ => {
            *slot = Some(value);
            Ok(())
        }
    }
}

fn resolve_dims(dims: Vec<Option<usize>>, what: &str) -> Result<Vec<usize>> {
    dims.into_iter()
        .enumerate()
        .map(|(i, d)| {
            d.ok_or_else(|| Error::BlockShape(format!("{what} {i} has only zero blocks")))
        })
        .collect()
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    sizes
        .iter()
        .map(|&s| {
            let o = acc;
            acc += s;
            o
        })
        .collect()
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        if self.rows <= 64 && self.cols <= 128 {
            for s in self.to_bitstrings() {
                writeln!(f, "  {s}")?;
            }
        }
        Ok(())
    }
}
