use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::distance::{distance_exhaustive, Distance};
use crate::error::{Error, Result};
use crate::gf2::BinaryMatrix;

/// Retry budget for configuration-model sampling. A (5,6)-regular draw is simple
/// with probability near 1e-5, so the budget must comfortably exceed 1e5.
pub const LDPC_RETRY_BUDGET: usize = 10_000_000;

/// A classical linear code given by its parity-check matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalCode {
    h: BinaryMatrix,
    rank: usize,
    d: Option<Distance>,
}

impl ClassicalCode {
    pub fn new(h: BinaryMatrix) -> Self {
        let rank = h.rank();
        Self { h, rank, d: None }
    }

    pub fn h(&self) -> &BinaryMatrix {
        &self.h
    }

    pub fn n(&self) -> usize {
        self.h.cols()
    }

    /// Number of checks.
    pub fn m(&self) -> usize {
        self.h.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn k(&self) -> usize {
        self.n() - self.rank
    }

    /// Dimension of the transpose code, `m - rank H`.
    pub fn k_transpose(&self) -> usize {
        self.m() - self.rank
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank == self.m()
    }

    pub fn d(&self) -> Option<Distance> {
        self.d
    }

    pub fn with_distance(mut self, d: Distance) -> Self {
        self.d = Some(d);
        self
    }

    /// Computes and caches the distance by exhaustive search, with an optional weight cap.
    pub fn compute_distance(mut self, weight_cap: Option<usize>) -> Result<Self> {
        self.d = Some(distance_exhaustive(&self.h, weight_cap)?);
        Ok(self)
    }

    pub fn transpose(&self) -> ClassicalCode {
        ClassicalCode {
            h: self.h.transpose(),
            rank: self.rank,
            d: None,
        }
    }
}

/// Samples a `(col_deg, row_deg)`-regular parity-check matrix from the bipartite
/// configuration model, redrawing the whole stub matching until the graph is simple.
pub fn sample_regular_ldpc(n: usize, col_deg: usize, row_deg: usize, seed: u64) -> Result<ClassicalCode> {
    let h = sample_regular_matrix(n, col_deg, row_deg, seed, LDPC_RETRY_BUDGET, false)?;
    Ok(ClassicalCode::new(h))
}

/// As [`sample_regular_ldpc`], additionally redrawing until `H` has full row rank.
pub fn sample_full_rank_ldpc(n: usize, col_deg: usize, row_deg: usize, seed: u64) -> Result<ClassicalCode> {
    let h = sample_regular_matrix(n, col_deg, row_deg, seed, LDPC_RETRY_BUDGET, true)?;
    Ok(ClassicalCode::new(h))
}

/// `budget` counts stub matchings drawn in total, across both rejection reasons.
pub fn sample_regular_matrix(
    n: usize,
    col_deg: usize,
    row_deg: usize,
    seed: u64,
    budget: usize,
    full_rank: bool,
) -> Result<BinaryMatrix> {
    if n == 0 || col_deg == 0 || row_deg == 0 {
        return Err(Error::InvalidParameter(
            "n, col_deg and row_deg must be positive".into(),
        ));
    }
    if (n * col_deg) % row_deg != 0 {
        return Err(Error::InvalidParameter(format!(
            "n * col_deg = {} is not divisible by row_deg = {row_deg}",
            n * col_deg
        )));
    }
    let m = n * col_deg / row_deg;
    if col_deg > m || row_deg > n {
        return Err(Error::InvalidParameter(
            "degrees too large for a simple graph".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut check_stubs: Vec<usize> = (0..m).flat_map(|c| std::iter::repeat(c).take(row_deg)).collect();
    'attempt: for _ in 0..budget {
        check_stubs.shuffle(&mut rng);
        let mut row_lists = vec![Vec::with_capacity(row_deg); m];
        for v in 0..n {
            for &c in &check_stubs[v * col_deg..(v + 1) * col_deg] {
                // v's stubs are placed consecutively, so a repeat shows up as the last entry.
                if row_lists[c].last() == Some(&v) {
                    continue 'attempt;
                }
                row_lists[c].push(v);
            }
        }
        let h = BinaryMatrix::from_row_lists(n, row_lists)?;
        if full_rank && h.rank() < m {
            continue;
        }
        return Ok(h);
    }
    Err(Error::SamplingExhausted { seed, budget })
}

/// Repetition code of length `ell`; check `j` joins bits `j` and `j + 1`.
pub fn repetition_code(ell: usize) -> Result<ClassicalCode> {
    if ell == 0 {
        return Err(Error::InvalidParameter("repetition length must be at least 1".into()));
    }
    let rows = (0..ell - 1).map(|j| vec![j, j + 1]).collect();
    let h = BinaryMatrix::from_row_lists(ell, rows)?;
    Ok(ClassicalCode::new(h).with_distance(Distance::Exact(ell)))
}

/// Star code: `z` chains of `branch_len` bits joined at one central check.
///
/// Bit `(branch, i)` has index `branch * branch_len + i`, with `i = 0` the outer end.
/// Chain check `branch * (branch_len - 1) + i` joins `(branch, i)` and `(branch, i + 1)`;
/// the last check, index `z * (branch_len - 1)`, joins the inner ends.
pub fn star_code(z: usize, branch_len: usize) -> Result<ClassicalCode> {
    if z < 2 || branch_len == 0 {
        return Err(Error::InvalidParameter(
            "star code needs z >= 2 and branch_len >= 1".into(),
        ));
    }
    let bit = |b: usize, i: usize| b * branch_len + i;
    let mut rows = Vec::new();
    for b in 0..z {
        for i in 0..branch_len - 1 {
            rows.push(vec![bit(b, i), bit(b, i + 1)]);
        }
    }
    rows.push((0..z).map(|b| bit(b, branch_len - 1)).collect());
    let h = BinaryMatrix::from_row_lists(z * branch_len, rows)?;
    Ok(ClassicalCode::new(h).with_distance(Distance::Exact(2 * branch_len)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repetition_examples() {
        let c = repetition_code(3).unwrap();
        assert_eq!(c.h().to_bitstrings(), vec!["110", "011"]);
        assert_eq!((c.n(), c.k()), (3, 1));
        let c = repetition_code(1).unwrap();
        assert_eq!(c.h().shape(), (0, 1));
        assert_eq!(c.k(), 1);
    }

    #[test]
    fn star_parameters() {
        let c = star_code(3, 2).unwrap();
        assert_eq!((c.n(), c.k()), (6, 2));
        assert!(c.is_full_rank());
        let central = c.h().row(c.m() - 1);
        assert_eq!(central, &[1, 3, 5]);
    }

    #[test]
    fn ldpc_regular_and_deterministic() {
        let a = sample_regular_ldpc(18, 5, 6, 7).unwrap();
        let b = sample_regular_ldpc(18, 5, 6, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.h().shape(), (15, 18));
        assert!((0..18).all(|c| a.h().col_weight(c) == 5));
        assert!((0..15).all(|r| a.h().row_weight(r) == 6));
    }

    #[test]
    fn ldpc_disjoint_checks() {
        let c = sample_regular_ldpc(6, 1, 3, 1).unwrap();
        assert!((0..6).all(|v| c.h().col_weight(v) == 1));
        assert!(c.rank() <= 2);
    }

    #[test]
    fn full_rank_sampler() {
        for seed in 0..5 {
            let c = sample_full_rank_ldpc(12, 5, 6, seed).unwrap();
            assert!(c.is_full_rank());
            assert_eq!(c.k(), 2);
        }
    }

    #[test]
    fn tiny_budget_reports_seed() {
        let err = sample_regular_matrix(18, 5, 6, 3, 1, false);
        assert!(matches!(err, Err(Error::SamplingExhausted { seed: 3, budget: 1 })) || err.is_ok());
    }

    #[test]
    fn ldpc_rejects_bad_degrees() {
        assert!(sample_regular_ldpc(7, 5, 6, 0).is_err());
    }
}
