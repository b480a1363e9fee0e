use std::fmt;
use std::ops::ControlFlow;

use crate::codes::css::CssCode;
use crate::error::{Error, Result};
use crate::gf2::enumerate::{ball_size, check_budget, SubsetWalker};
use crate::gf2::{BinaryMatrix, BinaryVector};

/// Kernel dimensions up to this size are enumerated codeword by codeword.
pub const MAX_ENUM_DIM: usize = 26;
/// Default number of candidate vectors a ball search may visit.
pub const DEFAULT_BALL_BUDGET: u128 = 1 << 32;

/// Result of a minimum-weight search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Distance {
    Exact(usize),
    /// No qualifying vector has weight below this value.
    LowerBound(usize),
    /// There is no qualifying vector at all.
    Infinite,
}

impl Distance {
    pub fn exact(self) -> Option<usize> {
        match self {
            Distance::Exact(d) => Some(d),
            _ => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Distance::Infinite
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Exact(d) => write!(f, "{d}"),
            Distance::LowerBound(d) => write!(f, ">={d}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

/// Minimum weight of a nonzero codeword of `ker H`.
///
/// Enumerates all codewords when the dimension is at most [`MAX_ENUM_DIM`];
/// otherwise searches balls of increasing radius up to `weight_cap`.
pub fn distance_exhaustive(h: &BinaryMatrix, weight_cap: Option<usize>) -> Result<Distance> {
    let kernel = h.kernel_basis();
    min_weight_nontrivial(h, &kernel, &BinaryMatrix::identity(h.cols()), weight_cap, DEFAULT_BALL_BUDGET)
}

/// Minimum weight over `v` with `A v = 0` and `T v != 0`.
///
/// `kernel` must be a basis of `ker A`. `T` decides nontriviality.
pub fn min_weight_nontrivial(
    a: &BinaryMatrix,
    kernel: &BinaryMatrix,
    t: &BinaryMatrix,
    weight_cap: Option<usize>,
    budget: u128,
) -> Result<Distance> {
    let dim = kernel.rows();
    let basis: Vec<BinaryVector> = (0..dim).map(|i| kernel.row_vector(i)).collect();
    let tags: Vec<BinaryVector> = basis.iter().map(|v| t.mul_vec(v)).collect();
    if tags.iter().all(BinaryVector::is_zero) {
        return Ok(Distance::Infinite);
    }
    if dim <= MAX_ENUM_DIM {
        let mut cur = BinaryVector::zeros(a.cols());
        let mut tag = BinaryVector::zeros(t.rows());
        let mut best = usize::MAX;
        for i in 1u64..(1u64 << dim) {
            let j = i.trailing_zeros() as usize;
            cur ^= &basis[j];
            tag ^= &tags[j];
            if !tag.is_zero() {
                best = best.min(cur.weight());
            }
        }
        return Ok(Distance::Exact(best));
    }
    let Some(cap) = weight_cap else {
        return Err(Error::BudgetExceeded {
            required: 1u128 << dim.min(127),
            budget: 1u128 << MAX_ENUM_DIM,
        });
    };
    ball_search(a, t, cap, budget)
}

fn ball_search(a: &BinaryMatrix, t: &BinaryMatrix, cap: usize, budget: u128) -> Result<Distance> {
    check_budget(ball_size(a.cols(), cap), budget)?;
    let walker = SubsetWalker::new(a);
    let zero = BinaryVector::zeros(a.rows());
    for w in 1..=cap {
        let found = walker.walk(w, &zero, |support, syn| {
            if syn.is_zero() {
                let v = BinaryVector::from_support(a.cols(), support).expect("valid support");
                if !t.mul_vec(&v).is_zero() {
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        });
        if found.is_break() {
            return Ok(Distance::Exact(w));
        }
    }
    Ok(Distance::LowerBound(cap + 1))
}

/// `(d_X, d_Z)`: minimum weights of nontrivial X and Z logical operators.
///
/// X logicals are `ker H_Z` modulo `rowspace H_X`, detected by a nonzero pairing with `ker H_X`.
pub fn css_distance_exhaustive(code: &CssCode, weight_cap: Option<usize>) -> Result<(Distance, Distance)> {
    let one = |checks: &BinaryMatrix, stabs: &BinaryMatrix, logical: Option<&BinaryMatrix>| {
        let test = match logical {
            Some(l) => l.clone(),
            // rowspace(stabs) is exactly the annihilator of ker(stabs).
            None => stabs.kernel_basis(),
        };
        min_weight_nontrivial(checks, &checks.kernel_basis(), &test, weight_cap, DEFAULT_BALL_BUDGET)
    };
    let dx = one(code.hz(), code.hx(), code.lz())?;
    let dz = one(code.hx(), code.hz(), code.lx())?;
    Ok((dx, dz))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::classical::repetition_code;
    use crate::codes::hgp::hypergraph_product;

    #[test]
    fn repetition_distance() {
        let c = repetition_code(5).unwrap();
        assert_eq!(distance_exhaustive(c.h(), None).unwrap(), Distance::Exact(5));
        assert_eq!(
            distance_exhaustive(repetition_code(9).unwrap().h(), None).unwrap(),
            Distance::Exact(9)
        );
    }

    #[test]
    fn full_rank_square_is_infinite() {
        let h = BinaryMatrix::from_bitstrings(&["11", "01"]).unwrap();
        assert_eq!(distance_exhaustive(&h, None).unwrap(), Distance::Infinite);
    }

    #[test]
    fn ball_search_matches_enumeration() {
        let h = repetition_code(5).unwrap().h().clone();
        let id = BinaryMatrix::identity(5);
        assert_eq!(ball_search(&h, &id, 4, 1 << 20).unwrap(), Distance::LowerBound(5));
        assert_eq!(ball_search(&h, &id, 5, 1 << 20).unwrap(), Distance::Exact(5));
    }

    #[test]
    fn surface_code_distance() {
        let r = repetition_code(3).unwrap();
        let hgp = hypergraph_product(&r, &r).unwrap();
        let (dx, dz) = css_distance_exhaustive(&hgp.code, None).unwrap();
        assert_eq!((dx, dz), (Distance::Exact(3), Distance::Exact(3)));
    }
}
