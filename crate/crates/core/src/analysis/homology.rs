use crate::analysis::distance::{min_weight_nontrivial, Distance, DEFAULT_BALL_BUDGET};
use crate::error::{Error, Result};
use crate::gf2::BinaryMatrix;

/// Homology dimensions of a chain `C_0 -d_1-> C_1 -d_2-> ... -> C_L`.
///
/// `maps[i]` is `d_{i+1}` with `cols = dim C_i` and `rows = dim C_{i+1}`. Returns
/// `dim ker(d_{i+1}) - rank(d_i)` for every position `i = 0..=L`.
pub fn homology_dims(maps: &[BinaryMatrix]) -> Result<Vec<usize>> {
    for (i, pair) in maps.windows(2).enumerate() {
        if pair[0].rows() != pair[1].cols() {
            return Err(Error::DimensionMismatch {
                op: "chain",
                left_rows: pair[0].rows(),
                left_cols: pair[0].cols(),
                right_rows: pair[1].rows(),
                right_cols: pair[1].cols(),
            });
        }
        if !pair[1].matmul(&pair[0])?.is_zero() {
            return Err(Error::NotAChain(i + 1));
        }
    }
    if maps.is_empty() {
        return Ok(Vec::new());
    }
    let ranks: Vec<usize> = maps.iter().map(BinaryMatrix::rank).collect();
    let mut dims = Vec::with_capacity(maps.len() + 1);
    for i in 0..=maps.len() {
        let space = if i < maps.len() { maps[i].cols() } else { maps[i - 1].rows() };
        let ker = if i < maps.len() { space - ranks[i] } else { space };
        let im = if i > 0 { ranks[i - 1] } else { 0 };
        dims.push(ker - im);
    }
    Ok(dims)
}

/// Minimum weight over nonzero classes of `ker M / im H`; infinite when the quotient is trivial.
///
/// A syndrome `s` lies outside `im H` exactly when some left null vector of `H` pairs
/// nontrivially with it.
pub fn single_shot_distance(h: &BinaryMatrix, m: &BinaryMatrix, cap: Option<usize>) -> Result<Distance> {
    if m.cols() != h.rows() {
        return Err(Error::DimensionMismatch {
            op: "single-shot distance",
            left_rows: m.rows(),
            left_cols: m.cols(),
            right_rows: h.rows(),
            right_cols: h.cols(),
        });
    }
    let test = h.left_kernel_basis();
    min_weight_nontrivial(m, &m.kernel_basis(), &test, cap, DEFAULT_BALL_BUDGET)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_maps_give_space_dims() {
        let dims = homology_dims(&[BinaryMatrix::zeros(3, 2), BinaryMatrix::zeros(4, 3)]).unwrap();
        assert_eq!(dims, vec![2, 3, 4]);
    }

    #[test]
    fn rejects_non_chain() {
        let a = BinaryMatrix::identity(2);
        assert!(matches!(homology_dims(&[a.clone(), a]), Err(Error::NotAChain(1))));
    }

    #[test]
    fn truncated_metachecks_give_finite_distance() {
        // H has two identical rows, so the syndrome space has a redundancy.
        let h = BinaryMatrix::from_bitstrings(&["11", "11"]).unwrap();
        let m = BinaryMatrix::from_bitstrings(&["11"]).unwrap();
        assert_eq!(single_shot_distance(&h, &m, None).unwrap(), Distance::Infinite);
        let empty = BinaryMatrix::zeros(0, 2);
        assert_eq!(single_shot_distance(&h, &empty, None).unwrap(), Distance::Exact(1));
    }
}
