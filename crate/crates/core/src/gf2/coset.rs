use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::gf2::dense::RowSpace;
use crate::gf2::matrix::BinaryMatrix;
use crate::gf2::vector::BinaryVector;

/// Default cap on the number of coset members enumerated exhaustively.
pub const DEFAULT_COSET_GUARD: u128 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CosetMode {
    /// Enumerate the whole coset if it has at most `guard` members.
    Exhaustive { guard: u128 },
    /// Greedy descent with the generator rows; the result is only an upper bound.
    Heuristic,
}

impl Default for CosetMode {
    fn default() -> Self {
        CosetMode::Exhaustive {
            guard: DEFAULT_COSET_GUARD,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetRep {
    pub vector: BinaryVector,
    /// False when the vector is only an upper bound from heuristic mode.
    pub exact: bool,
}

/// Minimum-weight element of `v + rowspace(S)`, lexicographically smallest among ties.
pub fn min_weight_coset_rep(v: &BinaryVector, s: &BinaryMatrix, mode: CosetMode) -> Result<CosetRep> {
    if v.len() != s.cols() {
        return Err(Error::LengthMismatch {
            op: "coset representative",
            expected: s.cols(),
            got: v.len(),
        });
    }
    match mode {
        CosetMode::Exhaustive { guard } => {
            let reducer = CosetReducer::new(s, guard)?;
            Ok(CosetRep {
                vector: reducer.min_rep(v),
                exact: true,
            })
        }
        CosetMode::Heuristic => Ok(CosetRep {
            vector: greedy_descent(v, s),
            exact: false,
        }),
    }
}

/// Precomputed basis of a stabilizer row space for repeated exact reductions.
#[derive(Clone, Debug)]
pub struct CosetReducer {
    basis: Vec<BinaryVector>,
    len: usize,
}

impl CosetReducer {
    pub fn new(s: &BinaryMatrix, guard: u128) -> Result<Self> {
        let space = RowSpace::from_matrix(s);
        let dim = space.dim();
        let required = 1u128.checked_shl(dim as u32).unwrap_or(u128::MAX);
        if required > guard {
            return Err(Error::BudgetExceeded {
                required,
                budget: guard,
            });
        }
        let bm = space.basis_matrix();
        let basis = (0..dim).map(|i| bm.row_vector(i)).collect();
        Ok(Self {
            basis,
            len: s.cols(),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Gray-code walk over the coset.
    pub fn min_rep(&self, v: &BinaryVector) -> BinaryVector {
        assert_eq!(v.len(), self.len);
        let mut cur = v.clone();
        let mut best = v.clone();
        let mut best_w = best.weight();
        for i in 1u64..(1u64 << self.basis.len()) {
            cur ^= &self.basis[i.trailing_zeros() as usize];
            let w = cur.weight();
            if w < best_w || (w == best_w && cur.lex_cmp(&best) == Ordering::Less) {
                best.clone_from(&cur);
                best_w = w;
            }
        }
        best
    }

    /// Reduced weight only; stops early once weight zero is seen.
    pub fn min_weight(&self, v: &BinaryVector) -> usize {
        let mut cur = v.clone();
        let mut best = cur.weight();
        for i in 1u64..(1u64 << self.basis.len()) {
            if best == 0 {
                break;
            }
            cur ^= &self.basis[i.trailing_zeros() as usize];
            best = best.min(cur.weight());
        }
        best
    }
}

/// Exact reduced weights for light vectors using only light stabilizers.
///
/// If `|v| <= radius` and `|v + g| < |v|`, then `|g| < 2|v|`, so the stabilizers of
/// weight below `2 radius` suffice. Heavier vectors fall back to the full walk.
#[derive(Clone, Debug)]
pub struct ShortCosetReducer {
    radius: usize,
    short: Vec<BinaryVector>,
    full: CosetReducer,
}

impl ShortCosetReducer {
    pub fn new(s: &BinaryMatrix, radius: usize, guard: u128) -> Result<Self> {
        let full = CosetReducer::new(s, guard)?;
        let mut short = Vec::new();
        let mut cur = BinaryVector::zeros(full.len);
        for i in 1u64..(1u64 << full.basis.len()) {
            cur ^= &full.basis[i.trailing_zeros() as usize];
            if cur.weight() < 2 * radius {
                short.push(cur.clone());
            }
        }
        Ok(Self { radius, short, full })
    }

    pub fn min_weight(&self, v: &BinaryVector) -> usize {
        let w = v.weight();
        if w > self.radius {
            return self.full.min_weight(v);
        }
        let mut best = w;
        for g in &self.short {
            let mut c = v.clone();
            c ^= g;
            best = best.min(c.weight());
        }
        best
    }
}

fn greedy_descent(v: &BinaryVector, s: &BinaryMatrix) -> BinaryVector {
    let rows: Vec<BinaryVector> = (0..s.rows()).map(|r| s.row_vector(r)).collect();
    let mut cur = v.clone();
    let mut w = cur.weight();
    loop {
        let mut improved = false;
        for row in &rows {
            let mut cand = cur.clone();
            cand ^= row;
            let cw = cand.weight();
            if cw < w {
                cur = cand;
                w = cw;
                improved = true;
            }
        }
        if !improved {
            return cur;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coset_examples() {
        let s = BinaryMatrix::from_bitstrings(&["110"]).unwrap();
        let zero = BinaryVector::zeros(3);
        let rep = min_weight_coset_rep(&zero, &s, CosetMode::default()).unwrap();
        assert!(rep.vector.is_zero() && rep.exact);

        let row = s.row_vector(0);
        let rep = min_weight_coset_rep(&row, &s, CosetMode::default()).unwrap();
        assert!(rep.vector.is_zero());

        let v = BinaryVector::from_bitstring("111").unwrap();
        let rep = min_weight_coset_rep(&v, &s, CosetMode::default()).unwrap();
        assert_eq!(rep.vector.to_bitstring(), "001");
    }

    #[test]
    fn lexicographic_tie_break() {
        // Coset {100, 010}: both weight 1, support {0} < {1}.
        let s = BinaryMatrix::from_bitstrings(&["110"]).unwrap();
        let v = BinaryVector::from_bitstring("010").unwrap();
        let rep = min_weight_coset_rep(&v, &s, CosetMode::default()).unwrap();
        assert_eq!(rep.vector.to_bitstring(), "100");
    }

    #[test]
    fn short_reducer_matches_full() {
        let s = BinaryMatrix::from_bitstrings(&["111100", "001111", "110011"]).unwrap();
        let full = CosetReducer::new(&s, 1 << 10).unwrap();
        let short = ShortCosetReducer::new(&s, 3, 1 << 10).unwrap();
        for bits in 0u32..64 {
            let support: Vec<usize> = (0..6).filter(|i| bits >> i & 1 == 1).collect();
            let v = BinaryVector::from_support(6, &support).unwrap();
            assert_eq!(short.min_weight(&v), full.min_weight(&v), "{support:?}");
        }
    }

    #[test]
    fn guard_rejects() {
        let s = BinaryMatrix::identity(30);
        let v = BinaryVector::zeros(30);
        let err = min_weight_coset_rep(&v, &s, CosetMode::Exhaustive { guard: 1 << 20 }).unwrap_err();
        assert_eq!(
            err,
            Error::BudgetExceeded {
                required: 1 << 30,
                budget: 1 << 20
            }
        );
        let rep = min_weight_coset_rep(&v, &s, CosetMode::Heuristic).unwrap();
        assert!(!rep.exact);
    }
}
