use std::collections::HashMap;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::gf2::coset::ShortCosetReducer;
use crate::gf2::enumerate::{ball_size, check_budget, SubsetWalker};
use crate::gf2::{BinaryMatrix, BinaryVector, Solver};

/// An increasing function on `0..=max`, stored as a table.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneFn {
    pub name: String,
    table: Vec<f64>,
}

impl MonotoneFn {
    pub fn from_fn(name: impl Into<String>, max_arg: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        Self::from_table(name, (0..=max_arg).map(f).collect())
    }

    pub fn from_table(name: impl Into<String>, table: Vec<f64>) -> Result<Self> {
        if table.windows(2).any(|w| w[1] < w[0]) || table.iter().any(|x| x.is_nan()) {
            return Err(Error::InvalidParameter("tabulated function is not monotone".into()));
        }
        Ok(Self {
            name: name.into(),
            table,
        })
    }

    /// `f(x) = alpha * x`.
    pub fn linear(alpha: f64, max_arg: usize) -> Self {
        Self::from_fn(format!("{alpha}x"), max_arg, |x| alpha * x as f64).expect("linear is monotone")
    }

    /// `f(x) = x^3 / 4`.
    pub fn cubic_quarter(max_arg: usize) -> Self {
        Self::from_fn("x^3/4", max_arg, |x| (x as f64).powi(3) / 4.0).expect("cubic is monotone")
    }

    pub fn max_arg(&self) -> usize {
        self.table.len().saturating_sub(1)
    }

    pub fn eval(&self, x: usize) -> Result<f64> {
        self.table.get(x).copied().ok_or_else(|| {
            Error::InvalidParameter(format!(
                "{} is tabulated up to {}, queried at {x}",
                self.name,
                self.max_arg()
            ))
        })
    }
}

#[derive(Clone, Debug)]
pub struct ConfinementReport {
    pub passed: bool,
    pub t: usize,
    pub errors_checked: u64,
    /// Largest `‖e‖ / f(|He|)`; infinite when a nonzero reduced error has zero bound.
    pub worst_ratio: f64,
    pub worst_error: Option<BinaryVector>,
    pub violation: Option<BinaryVector>,
}

/// Checks `f(|H e|) >= ‖e‖` for every error of reduced weight at most `t`.
///
/// Reduced weight is taken over `rowspace(S)`. Every class with reduced weight at
/// most `t` has a representative of Hamming weight at most `t`, so the ball of
/// radius `t` is enumerated.
pub fn confinement_check(
    h: &BinaryMatrix,
    s: &BinaryMatrix,
    t: usize,
    f: &MonotoneFn,
    budget: u128,
) -> Result<ConfinementReport> {
    check_budget(ball_size(h.cols(), t), budget)?;
    let reducer = ShortCosetReducer::new(s, t, crate::gf2::coset::DEFAULT_COSET_GUARD)?;
    let max_syndrome = t * h.max_col_weight();
    if f.max_arg() < max_syndrome.min(h.rows()) {
        return Err(Error::InvalidParameter(format!(
            "{} must be tabulated up to {}",
            f.name,
            max_syndrome.min(h.rows())
        )));
    }
    let walker = SubsetWalker::new(h);
    let zero = BinaryVector::zeros(h.rows());
    let mut report = ConfinementReport {
        passed: true,
        t,
        errors_checked: 0,
        worst_ratio: 0.0,
        worst_error: None,
        violation: None,
    };
    for w in 1..=t {
        let _ = walker.walk::<()>(w, &zero, |support, syn| {
            report.errors_checked += 1;
            let bound = f.eval(syn.weight()).expect("table covers syndrome weights");
            // ‖e‖ <= |e| = w; the reduction only matters when it could raise the ratio.
            if (w as f64) <= bound && report.worst_ratio >= 1.0 {
                return ControlFlow::Continue(());
            }
            let e = BinaryVector::from_support(h.cols(), support).expect("valid support");
            let reduced = reducer.min_weight(&e);
            if reduced == 0 || reduced > t {
                return ControlFlow::Continue(());
            }
            let ratio = if bound > 0.0 { reduced as f64 / bound } else { f64::INFINITY };
            if ratio > report.worst_ratio {
                report.worst_ratio = ratio;
                report.worst_error = Some(e.clone());
            }
            if reduced as f64 > bound && report.violation.is_none() {
                report.passed = false;
                report.violation = Some(e);
            }
            ControlFlow::Continue(())
        });
    }
    Ok(report)
}

/// Smallest monotone `f` for which `h` is `(t, f)`-confined over `rowspace(s)`.
///
/// Entry `x` is the largest reduced weight (at most `t`) among errors of Hamming
/// weight at most `t` whose syndrome weight is at most `x`. A nonzero entry at 0
/// means a nontrivial logical of weight at most `t` exists.
pub fn confinement_profile(h: &BinaryMatrix, s: &BinaryMatrix, t: usize, budget: u128) -> Result<MonotoneFn> {
    check_budget(ball_size(h.cols(), t), budget)?;
    let reducer = ShortCosetReducer::new(s, t, crate::gf2::coset::DEFAULT_COSET_GUARD)?;
    let mut table = vec![0.0f64; h.rows() + 1];
    let walker = SubsetWalker::new(h);
    let zero = BinaryVector::zeros(h.rows());
    for w in 1..=t {
        let _ = walker.walk::<()>(w, &zero, |support, syn| {
            let x = syn.weight();
            if table[x] >= w as f64 {
                return ControlFlow::Continue(());
            }
            let e = BinaryVector::from_support(h.cols(), support).expect("valid support");
            let reduced = reducer.min_weight(&e);
            if reduced <= t && reduced as f64 > table[x] {
                table[x] = reduced as f64;
            }
            ControlFlow::Continue(())
        });
    }
    for x in 1..table.len() {
        table[x] = table[x].max(table[x - 1]);
    }
    MonotoneFn::from_table(format!("confinement profile t={t}"), table)
}

#[derive(Clone, Debug)]
pub struct SoundnessReport {
    pub passed: bool,
    pub t: usize,
    pub syndromes_checked: u64,
    pub worst_ratio: f64,
    pub worst_syndrome: Option<BinaryVector>,
    pub violation: Option<BinaryVector>,
    /// True when `H` has full row rank, so every syndrome is valid and no metacheck exists.
    pub no_redundancy: bool,
}

/// Checks that every valid syndrome `s` with `|s| <= t` has a preimage of weight at most `f(|s|)`.
///
/// The minimum reduced weight over preimages equals the minimum Hamming weight, so
/// errors are enumerated by increasing weight up to `floor(f(t))` and the lightest
/// preimage of each small syndrome is recorded.
pub fn soundness_check(
    h: &BinaryMatrix,
    _s: &BinaryMatrix,
    t: usize,
    f: &MonotoneFn,
    budget: u128,
) -> Result<SoundnessReport> {
    let ft = f.eval(t.min(h.rows()))?;
    let w_max = (ft.floor() as usize).min(h.cols());
    check_budget(
        ball_size(h.cols(), w_max).saturating_add(ball_size(h.rows(), t)),
        budget,
    )?;
    let walker = SubsetWalker::new(h);
    let zero = BinaryVector::zeros(h.rows());
    let mut lightest: HashMap<BinaryVector, usize> = HashMap::new();
    for w in 0..=w_max {
        let _ = walker.walk::<()>(w, &zero, |_, syn| {
            if syn.weight() <= t {
                lightest.entry(syn.clone()).or_insert(w);
            }
            ControlFlow::Continue(())
        });
    }
    let solver = Solver::new(h);
    let mut report = SoundnessReport {
        passed: true,
        t,
        syndromes_checked: 0,
        worst_ratio: 0.0,
        worst_syndrome: None,
        violation: None,
        no_redundancy: solver.rank() == h.rows(),
    };
    let no_checks = BinaryMatrix::zeros(0, h.rows());
    let syn_walker = SubsetWalker::new(&no_checks);
    let empty = BinaryVector::zeros(0);
    for sw in 1..=t.min(h.rows()) {
        let bound = f.eval(sw)?;
        let _ = syn_walker.walk::<()>(sw, &empty, |support, _| {
            let syn = BinaryVector::from_support(h.rows(), support).expect("valid support");
            if !solver.in_image(&syn) {
                return ControlFlow::Continue(());
            }
            report.syndromes_checked += 1;
            let (weight, ok) = match lightest.get(&syn) {
                Some(&w) => (w as f64, w as f64 <= bound),
                None => (f64::INFINITY, false),
            };
            let ratio = if bound > 0.0 { weight / bound } else { f64::INFINITY };
            if ratio > report.worst_ratio {
                report.worst_ratio = ratio;
                report.worst_syndrome = Some(syn.clone());
            }
            if !ok && report.violation.is_none() {
                report.passed = false;
                report.violation = Some(syn);
            }
            ControlFlow::Continue(())
        });
    }
    Ok(report)
}
