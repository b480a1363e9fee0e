use std::collections::HashMap;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::gf2::enumerate::{binomial, check_budget, SubsetWalker};
use crate::gf2::{BinaryMatrix, BinaryVector, Solver};

/// Minimum-weight solutions of `H e = s` by enumeration in order of weight.
///
/// Ties go to the lexicographically first support.
#[derive(Clone, Debug)]
pub struct ExactDecoder {
    h: BinaryMatrix,
    solver: Solver,
    budget: u128,
}

impl ExactDecoder {
    pub fn new(h: &BinaryMatrix, budget: u128) -> Self {
        Self {
            h: h.clone(),
            solver: Solver::new(h),
            budget,
        }
    }

    pub fn decode(&self, s: &BinaryVector) -> Result<BinaryVector> {
        if !self.solver.in_image(s) {
            return Err(Error::SyndromeNotInImage);
        }
        let walker = SubsetWalker::new(&self.h);
        let n = self.h.cols();
        let mut spent: u128 = 0;
        for w in 0..=n {
            spent = spent.saturating_add(binomial(n, w));
            check_budget(spent, self.budget)?;
            let hit = walker.walk(w, s, |support, syn| {
                if syn.is_zero() {
                    ControlFlow::Break(support.to_vec())
                } else {
                    ControlFlow::Continue(())
                }
            });
            if let ControlFlow::Break(support) = hit {
                return BinaryVector::from_support(n, &support);
            }
        }
        unreachable!("a syndrome in the image has a preimage")
    }
}

pub fn exact_min_weight_decode(h: &BinaryMatrix, s: &BinaryVector, budget: u128) -> Result<BinaryVector> {
    ExactDecoder::new(h, budget).decode(s)
}

/// Two-step minimum-weight decoder with repair radius `t`.
///
/// Step 1 picks the lightest `ŝ` such that `s + ŝ` is the syndrome of some error of
/// weight at most `t`; step 2 returns the lightest preimage of `s + ŝ`. The syndrome
/// is constant on stabilizer cosets, so Hamming weight stands in for reduced weight.
#[derive(Clone, Debug)]
pub struct ShadowDecoder {
    rows: usize,
    t: usize,
    table: HashMap<BinaryVector, BinaryVector>,
    repair_budget: u128,
}

impl ShadowDecoder {
    pub fn new(h: &BinaryMatrix, t: usize, budget: u128) -> Result<Self> {
        let n = h.cols();
        let mut spent: u128 = 0;
        let walker = SubsetWalker::new(h);
        let zero = BinaryVector::zeros(h.rows());
        let mut table = HashMap::new();
        for w in 0..=t.min(n) {
            spent = spent.saturating_add(binomial(n, w));
            check_budget(spent, budget)?;
            let _ = walker.walk::<()>(w, &zero, |support, syn| {
                table
                    .entry(syn.clone())
                    .or_insert_with(|| BinaryVector::from_support(n, support).expect("valid support"));
                ControlFlow::Continue(())
            });
        }
        Ok(Self {
            rows: h.rows(),
            t,
            table,
            repair_budget: budget,
        })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Number of distinct syndromes reachable within radius `t`.
    pub fn producible(&self) -> usize {
        self.table.len()
    }

    /// Returns `(ŝ, ê)`.
    pub fn decode(&self, observed: &BinaryVector) -> Result<(BinaryVector, BinaryVector)> {
        if observed.len() != self.rows {
            return Err(Error::LengthMismatch {
                op: "shadow decode",
                expected: self.rows,
                got: observed.len(),
            });
        }
        let flips = BinaryMatrix::identity(self.rows);
        let walker = SubsetWalker::new(&flips);
        let mut spent: u128 = 0;
        for w in 0..=self.rows {
            spent = spent.saturating_add(binomial(self.rows, w));
            if spent > self.repair_budget {
                break;
            }
            let hit = walker.walk(w, observed, |support, repaired| match self.table.get(repaired) {
                Some(e) => ControlFlow::Break((support.to_vec(), e.clone())),
                None => ControlFlow::Continue(()),
            });
            if let ControlFlow::Break((support, e)) = hit {
                return Ok((BinaryVector::from_support(self.rows, &support)?, e));
            }
        }
        Err(Error::NoRepairWithinRadius { t: self.t })
    }
}

pub fn shadow_decode(
    h: &BinaryMatrix,
    observed: &BinaryVector,
    t: usize,
    budget: u128,
) -> Result<(BinaryVector, BinaryVector)> {
    ShadowDecoder::new(h, t, budget)?.decode(observed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::classical::repetition_code;

    #[test]
    fn zero_and_chain_syndromes() {
        let h = repetition_code(5).unwrap().h().clone();
        assert!(exact_min_weight_decode(&h, &BinaryVector::zeros(4), 1 << 20).unwrap().is_zero());
        let e = BinaryVector::from_bitstring("11000").unwrap();
        let x = exact_min_weight_decode(&h, &h.mul_vec(&e), 1 << 20).unwrap();
        assert_eq!(x.weight(), 2);
        assert_eq!(h.mul_vec(&x), h.mul_vec(&e));
    }

    #[test]
    fn exact_rejects_invalid_and_budget() {
        let h = BinaryMatrix::from_bitstrings(&["11", "11"]).unwrap();
        let bad = BinaryVector::from_bitstring("10").unwrap();
        assert!(matches!(exact_min_weight_decode(&h, &bad, 100), Err(Error::SyndromeNotInImage)));
        let h = repetition_code(9).unwrap().h().clone();
        let s = h.mul_vec(&BinaryVector::from_bitstring("111100000").unwrap());
        assert!(matches!(exact_min_weight_decode(&h, &s, 10), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn shadow_true_syndrome() {
        let h = repetition_code(5).unwrap().h().clone();
        let e = BinaryVector::from_support(5, &[2]).unwrap();
        let (repair, corr) = shadow_decode(&h, &h.mul_vec(&e), 1, 1 << 20).unwrap();
        assert!(repair.is_zero());
        assert_eq!(corr, e);
    }

    #[test]
    fn shadow_repairs_flipped_check() {
        let h = repetition_code(5).unwrap().h().clone();
        // Syndrome 1000 comes from bit 0 alone; 1010 needs a weight-2 error or one flip.
        let s = BinaryVector::from_bitstring("1010").unwrap();
        let (repair, corr) = shadow_decode(&h, &s, 1, 1 << 20).unwrap();
        assert_eq!(repair.weight(), 1);
        let mut target = s.clone();
        target ^= &repair;
        assert_eq!(h.mul_vec(&corr), target);
        assert!(corr.weight() <= 1);
    }
}
