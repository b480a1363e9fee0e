use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BinaryVector};

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Number of vectors of length `n` with weight at most `t`.
pub fn ball_size(n: usize, t: usize) -> u128 {
    (0..=t.min(n)).fold(0u128, |acc, w| acc.saturating_add(binomial(n, w)))
}

pub fn check_budget(required: u128, budget: u128) -> Result<()> {
    if required > budget {
        Err(Error::BudgetExceeded { required, budget })
    } else {
        Ok(())
    }
}

/// Visits every support of size exactly `w` in lexicographic order together with
/// `H e` for the corresponding vector, maintained incrementally.
pub struct SubsetWalker<'a> {
    cols: Vec<BinaryVector>,
    h: &'a BinaryMatrix,
    allowed: Option<Vec<usize>>,
}

impl<'a> SubsetWalker<'a> {
    pub fn new(h: &'a BinaryMatrix) -> Self {
        let cols = (0..h.cols())
            .map(|c| BinaryVector::from_support(h.rows(), h.col(c)).expect("column indices valid"))
            .collect();
        Self {
            cols,
            h,
            allowed: None,
        }
    }

    /// Restricts supports to the given columns (visited in the order given).
    pub fn restrict_to(mut self, cols: Vec<usize>) -> Self {
        self.allowed = Some(cols);
        self
    }

    fn universe(&self) -> Vec<usize> {
        self.allowed
            .clone()
            .unwrap_or_else(|| (0..self.h.cols()).collect())
    }

    pub fn universe_len(&self) -> usize {
        self.allowed.as_ref().map_or(self.h.cols(), Vec::len)
    }

    /// Calls `visit(support, syndrome)` for every support of size `w`.
    /// Returns `Break` as soon as the visitor does.
    pub fn walk<B>(
        &self,
        w: usize,
        start: &BinaryVector,
        mut visit: impl FnMut(&[usize], &BinaryVector) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        let universe = self.universe();
        if w > universe.len() {
            return ControlFlow::Continue(());
        }
        let mut support = Vec::with_capacity(w);
        let mut stack = vec![start.clone(); w + 1];
        self.rec(&universe, w, 0, &mut support, &mut stack, &mut visit)
    }

    fn rec<B>(
        &self,
        universe: &[usize],
        w: usize,
        from: usize,
        support: &mut Vec<usize>,
        stack: &mut [BinaryVector],
        visit: &mut impl FnMut(&[usize], &BinaryVector) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        let depth = support.len();
        if depth == w {
            return visit(support, &stack[depth]);
        }
        let remaining = w - depth;
        for pos in from..=universe.len() - remaining {
            let c = universe[pos];
            let (lo, hi) = stack.split_at_mut(depth + 1);
            hi[0].clone_from(&lo[depth]);
            hi[0] ^= &self.cols[c];
            support.push(c);
            self.rec(universe, w, pos + 1, support, stack, visit)?;
            support.pop();
        }
        ControlFlow::Continue(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(ball_size(4, 2), 11);
        assert_eq!(binomial(60, 30), 118264581564861424);
    }

    #[test]
    fn walker_visits_in_lex_order_with_syndromes() {
        let h = BinaryMatrix::from_bitstrings(&["110", "011"]).unwrap();
        let walker = SubsetWalker::new(&h);
        let mut seen = Vec::new();
        let _ = walker.walk::<()>(2, &BinaryVector::zeros(2), |s, syn| {
            seen.push((s.to_vec(), syn.to_bitstring()));
            ControlFlow::Continue(())
        });
        assert_eq!(
            seen,
            vec![
                (vec![0, 1], "01".to_string()),
                (vec![0, 2], "11".to_string()),
                (vec![1, 2], "10".to_string())
            ]
        );
    }
}
