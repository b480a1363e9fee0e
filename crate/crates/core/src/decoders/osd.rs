use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BinaryVector, BitMatrix};

/// Which flips the combination sweep tries on top of the OSD-0 solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SweepSet {
    /// Every single non-pivot flip, plus all pairs among the first `depth` non-pivots.
    #[default]
    Full,
    /// Singles and all pairs, both among the first `depth` non-pivots.
    Depth,
    /// Singles among the first `depth` non-pivots and adjacent pairs `(i, i+1)` there.
    Adjacent,
}

impl SweepSet {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(SweepSet::Full),
            "depth" => Ok(SweepSet::Depth),
            "adjacent" => Ok(SweepSet::Adjacent),
            _ => Err(Error::InvalidParameter(format!("unknown sweep set {s:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SweepSet::Full => "full",
            SweepSet::Depth => "depth",
            SweepSet::Adjacent => "adjacent",
        }
    }
}

/// Ordered-statistics postprocessing with a combination sweep. Depth 0 gives OSD-0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OsdConfig {
    pub search_depth: usize,
    pub sweep: SweepSet,
}

impl Default for OsdConfig {
    fn default() -> Self {
        Self {
            search_depth: 20,
            sweep: SweepSet::Full,
        }
    }
}

/// Cost of a candidate: summed channel LLRs, then Hamming weight, then lexicographic order.
#[derive(Clone, Debug)]
struct Scored {
    soft: f64,
    weight: usize,
    x: BinaryVector,
}

impl Scored {
    fn new(x: BinaryVector, cost: &[f64]) -> Self {
        let soft = x.iter_support().map(|i| cost[i]).sum();
        Self {
            soft,
            weight: x.weight(),
            x,
        }
    }

    fn better_than(&self, other: &Scored) -> bool {
        if self.soft.is_infinite() || other.soft.is_infinite() {
            if self.soft != other.soft {
                return self.soft < other.soft;
            }
        } else {
            let tol = 1e-9 * (1.0 + self.soft.abs().max(other.soft.abs()));
            if (self.soft - other.soft).abs() > tol {
                return self.soft < other.soft;
            }
        }
        match self.weight.cmp(&other.weight) {
            Ordering::Equal => self.x.lex_cmp(&other.x) == Ordering::Less,
            o => o == Ordering::Less,
        }
    }
}

/// Solves `H x = s` on an information set picked by reliability.
///
/// Bits are sorted by increasing `reliability` (most likely flipped first, index
/// breaks ties). `cost[i]` weighs bit `i` when candidates are compared; use the
/// channel LLRs, with `f64::INFINITY` to forbid a bit.
pub fn osd_postprocess(
    h: &BinaryMatrix,
    s: &BinaryVector,
    reliability: &[f64],
    cost: &[f64],
    cfg: &OsdConfig,
) -> Result<BinaryVector> {
    let n = h.cols();
    if s.len() != h.rows() || reliability.len() != n || cost.len() != n {
        return Err(Error::LengthMismatch {
            op: "osd",
            expected: n,
            got: reliability.len().min(cost.len()),
        });
    }
    if s.is_zero() {
        return Ok(BinaryVector::zeros(n));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| reliability[a].total_cmp(&reliability[b]).then(a.cmp(&b)));

    let mut d = BitMatrix::zeros(h.rows(), n + 1);
    for (pos, &col) in order.iter().enumerate() {
        for &r in h.col(col) {
            d.set(r, pos, true);
        }
    }
    for r in s.iter_support() {
        d.set(r, n, true);
    }
    let pivots = d.rref_prefix(n);
    let rank = pivots.len();
    if (rank..h.rows()).any(|r| d.get(r, n)) {
        return Err(Error::SyndromeNotInImage);
    }

    // Candidates live in sorted coordinates until the winner is mapped back.
    let sorted_cost: Vec<f64> = order.iter().map(|&c| cost[c]).collect();
    let to_original = |x: &BinaryVector| {
        let mut out = BinaryVector::zeros(n);
        for pos in x.iter_support() {
            out.set(order[pos], true);
        }
        out
    };
    let mut x0 = BinaryVector::zeros(n);
    for (i, &p) in pivots.iter().enumerate() {
        if d.get(i, n) {
            x0.set(p, true);
        }
    }
    if cfg.search_depth == 0 {
        return Ok(to_original(&x0));
    }

    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let non_pivots: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let depth = cfg.search_depth.min(non_pivots.len());
    let singles = match cfg.sweep {
        SweepSet::Full => non_pivots.len(),
        SweepSet::Depth | SweepSet::Adjacent => depth,
    };
    // Flipping non-pivot j toggles j and every pivot whose row has a one in column j.
    let flips: Vec<BinaryVector> = non_pivots[..singles]
        .iter()
        .map(|&j| {
            let mut f = BinaryVector::zeros(n);
            f.set(j, true);
            for (i, &p) in pivots.iter().enumerate() {
                if d.get(i, j) {
                    f.set(p, true);
                }
            }
            f
        })
        .collect();

    let mut best = Scored::new(x0.clone(), &sorted_cost);
    let consider = |x: BinaryVector, best: &mut Scored| {
        let cand = Scored::new(x, &sorted_cost);
        if cand.better_than(best) {
            *best = cand;
        }
    };
    for f in &flips {
        let mut x = x0.clone();
        x ^= f;
        consider(x, &mut best);
    }
    let pairs: Vec<(usize, usize)> = match cfg.sweep {
        SweepSet::Adjacent => (1..depth).map(|j| (j - 1, j)).collect(),
        _ => (0..depth)
            .flat_map(|a| (a + 1..depth).map(move |b| (a, b)))
            .collect(),
    };
    for (a, b) in pairs {
        let mut x = x0.clone();
        x ^= &flips[a];
        x ^= &flips[b];
        consider(x, &mut best);
    }
    Ok(to_original(&best.x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::classical::repetition_code;

    fn uniform(n: usize) -> Vec<f64> {
        vec![1.0; n]
    }

    #[test]
    fn zero_syndrome() {
        let h = repetition_code(4).unwrap().h().clone();
        let x = osd_postprocess(&h, &BinaryVector::zeros(3), &uniform(4), &uniform(4), &OsdConfig::default()).unwrap();
        assert!(x.is_zero());
    }

    #[test]
    fn depth_zero_is_osd0() {
        let h = repetition_code(5).unwrap().h().clone();
        let e = BinaryVector::from_support(5, &[2]).unwrap();
        let s = h.mul_vec(&e);
        // Reliabilities point at the wrong side: OSD-0 follows them, the sweep repairs.
        let rel = vec![-1.0, -1.0, 0.0, 1.0, 1.0];
        let cfg0 = OsdConfig {
            search_depth: 0,
            ..OsdConfig::default()
        };
        let x0 = osd_postprocess(&h, &s, &rel, &uniform(5), &cfg0).unwrap();
        assert_eq!(h.mul_vec(&x0), s);
        let x = osd_postprocess(&h, &s, &rel, &uniform(5), &OsdConfig::default()).unwrap();
        assert_eq!(h.mul_vec(&x), s);
        assert!(x.weight() <= x0.weight());
        assert_eq!(x, e);
    }

    #[test]
    fn rejects_invalid_syndrome() {
        let h = BinaryMatrix::from_bitstrings(&["11", "11"]).unwrap();
        let s = BinaryVector::from_bitstring("10").unwrap();
        let r = osd_postprocess(&h, &s, &uniform(2), &uniform(2), &OsdConfig::default());
        assert!(matches!(r, Err(Error::SyndromeNotInImage)));
    }

    #[test]
    fn forbidden_bits_avoided() {
        let h = BinaryMatrix::from_bitstrings(&["11"]).unwrap();
        let s = BinaryVector::from_bitstring("1").unwrap();
        let x = osd_postprocess(&h, &s, &[0.0, 0.0], &[f64::INFINITY, 1.0], &OsdConfig::default()).unwrap();
        assert_eq!(x.to_bitstring(), "01");
    }

    #[test]
    fn sweep_names_round_trip() {
        for s in [SweepSet::Full, SweepSet::Depth, SweepSet::Adjacent] {
            assert_eq!(SweepSet::parse(s.name()).unwrap(), s);
        }
    }
}
