use std::ops::ControlFlow;

use rand::seq::index::sample;

use crate::analysis::confinement::{confinement_check, confinement_profile, MonotoneFn};
use crate::codes::thicken::{QubitSite, ThickenedCode};
use crate::decoders::{ExactDecoder, ShadowDecoder};
use crate::error::{Error, Result};
use crate::gf2::coset::{CosetReducer, ShortCosetReducer, DEFAULT_COSET_GUARD};
use crate::gf2::enumerate::SubsetWalker;
use crate::gf2::{BinaryMatrix, BinaryVector, Solver};
use crate::protocol::rng::{trial_rng, Stream};
use crate::protocol::simulate::ProtocolSetup;
use crate::protocol::stage2::{collapse, reconstruct_sheet_views, sample_intrinsic_error};

/// Outcome of one exhaustive bound suite.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub name: String,
    pub passed: bool,
    pub cases: u64,
    pub violations: u64,
    /// Largest observed weight divided by its bound (0 when every bound is met at weight 0).
    pub worst_ratio: f64,
    pub worst_case: Option<String>,
    pub note: String,
}

impl BoundReport {
    fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: true,
            cases: 0,
            violations: 0,
            worst_ratio: 0.0,
            worst_case: None,
            note: String::new(),
        }
    }

    fn record(&mut self, weight: usize, bound: f64, case: impl FnOnce() -> String) {
        self.cases += 1;
        let ratio = if bound > 0.0 {
            weight as f64 / bound
        } else if weight == 0 {
            0.0
        } else {
            f64::INFINITY
        };
        let violated = weight as f64 > bound;
        if ratio > self.worst_ratio || (violated && self.violations == 0) {
            self.worst_ratio = self.worst_ratio.max(ratio);
            self.worst_case = Some(case());
        }
        if violated {
            self.violations += 1;
            self.passed = false;
        }
    }

    fn fail(&mut self, case: String) {
        self.cases += 1;
        self.violations += 1;
        self.passed = false;
        self.worst_ratio = f64::INFINITY;
        self.worst_case.get_or_insert(case);
    }

    pub fn summary(&self) -> String {
        format!(
            "{} {}: cases={} violations={} worst_ratio={:.4}{}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.violations,
            self.worst_ratio,
            if self.note.is_empty() { String::new() } else { format!(" ({})", self.note) }
        )
    }
}

/// Which syndrome errors the stage-1 suite covers.
#[derive(Clone, Copy, Debug)]
pub struct SyndromeErrorSet {
    /// Every `s_e` with `1 <= |s_e| <= exhaustive_max`.
    pub exhaustive_max: usize,
    /// `(weight, count, seed)`: uniformly sampled `s_e` of one weight.
    pub sampled: Option<(usize, u64, u64)>,
}

/// Stage 1 with exact minimum-weight decoders.
pub struct ExactStage1 {
    hz: BinaryMatrix,
    meta: Option<ExactDecoder>,
    mz: BinaryMatrix,
    main: ExactDecoder,
    image: Solver,
}

impl ExactStage1 {
    pub fn new(thick: &ThickenedCode, budget: u128) -> Self {
        let hz = thick.code.hz().clone();
        let mz = thick.mz().clone();
        Self {
            meta: (mz.rows() > 0).then(|| ExactDecoder::new(&mz, budget)),
            main: ExactDecoder::new(&hz, budget),
            image: Solver::new(&hz),
            hz,
            mz,
        }
    }

    /// Residual `e + ê` for zero data error and syndrome error `s_e`.
    pub fn residual(&self, s_e: &BinaryVector) -> Result<BinaryVector> {
        let mut repaired = s_e.clone();
        if let Some(meta) = &self.meta {
            let ms = self.mz.mul_vec(s_e);
            repaired ^= &meta.decode(&ms)?;
        }
        if !self.image.in_image(&repaired) {
            return Err(Error::SyndromeNotInImage);
        }
        let corr = self.main.decode(&repaired)?;
        debug_assert_eq!(self.hz.mul_vec(&corr), repaired);
        Ok(corr)
    }
}

fn each_syndrome_error(len: usize, set: &SyndromeErrorSet, mut f: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    let none = BinaryMatrix::zeros(0, len);
    let walker = SubsetWalker::new(&none);
    let empty = BinaryVector::zeros(0);
    for w in 1..=set.exhaustive_max.min(len) {
        let mut err = None;
        let _ = walker.walk::<()>(w, &empty, |support, _| match f(support) {
            Ok(()) => ControlFlow::Continue(()),
            Err(e) => {
                err = Some(e);
                ControlFlow::Break(())
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    if let Some((w, count, seed)) = set.sampled {
        if w > len {
            return Err(Error::InvalidParameter(format!("cannot sample weight {w} out of {len}")));
        }
        for i in 0..count {
            let mut rng = trial_rng(seed, w as u64, i, Stream::Stage1);
            let mut support = sample(&mut rng, len, w).into_vec();
            support.sort_unstable();
            f(&support)?;
        }
    }
    Ok(())
}

/// Stage-1 residual bound `‖e + ê‖ <= f(2|s_e|)` with `f(x) = x^3/4`, i.e. `2|s_e|^3`.
///
/// The residual is reduced over the X stabilizers of the thickened code.
pub fn stage1_bound_suite(thick: &ThickenedCode, set: &SyndromeErrorSet, budget: u128) -> Result<BoundReport> {
    let exact = ExactStage1::new(thick, budget);
    let reducer = CosetReducer::new(thick.code.hx(), DEFAULT_COSET_GUARD)?;
    let mut report = BoundReport::new("stage-1 residual <= 2|s_e|^3");
    let rows = thick.code.hz().rows();
    each_syndrome_error(rows, set, |support| {
        let s_e = BinaryVector::from_support(rows, support)?;
        match exact.residual(&s_e) {
            Ok(r) => {
                let w = reducer.min_weight(&r);
                let bound = 2.0 * (support.len() as f64).powi(3);
                report.record(w, bound, || format!("s_e={support:?} residual weight {w}"));
            }
            Err(Error::SyndromeNotInImage) => report.fail(format!("s_e={support:?}: repair left the image")),
            Err(e) => return Err(e),
        }
        Ok(())
    })?;
    Ok(report)
}

/// Parameters of the stage-2 suite.
#[derive(Clone, Debug)]
pub struct Stage2BoundSpec {
    /// Confinement cutoff of the base `H_X`.
    pub t: usize,
    /// Confinement function; `None` uses the tightest profile.
    pub f: Option<MonotoneFn>,
    /// Random intrinsic errors per bulk error, in addition to the zero element.
    pub intrinsic_samples: u64,
    pub seed: u64,
    /// Bound on the boundary residual; `None` means `t/4`.
    pub bound: Option<f64>,
    pub budget: u128,
}

/// Stage-2 residual bound with shadow decoding at parameter `t/2`.
///
/// Enumerates every bulk error whose sheet part `E` has weight at most `t/4` and
/// whose intermediate part `S_e` satisfies `f(2|S_e|) <= t/4`, runs the collapse
/// and checks the reduced weight of each boundary residual.
pub fn stage2_bound_suite(setup: &ProtocolSetup, spec: &Stage2BoundSpec) -> Result<BoundReport> {
    let thick = &setup.thick;
    let base = setup.base();
    let t = spec.t;
    let f = match &spec.f {
        Some(f) => f.clone(),
        None => confinement_profile(base.hx(), base.hz(), t, spec.budget)?,
    };
    let bound = spec.bound.unwrap_or(t as f64 / 4.0);
    let mut report = BoundReport::new(format!("stage-2 boundary residual <= {bound}"));
    let conf = confinement_check(base.hx(), base.hz(), t, &f, spec.budget)?;
    if !conf.passed || f.eval(0)? > 0.0 {
        report.passed = false;
        report.note = format!("H_X is not ({t}, {})-confined; hypotheses fail", f.name);
        return Ok(report);
    }
    let quarter = t as f64 / 4.0;
    let e_max = (quarter.floor()) as usize;
    let mut s_max = 0;
    while 2 * (s_max + 1) <= f.max_arg() && f.eval(2 * (s_max + 1))? <= quarter {
        s_max += 1;
    }
    report.note = format!("t={t}, |E|<={e_max}, |S_e|<={s_max}, shadow t/2={}", t / 2);

    let mut shadow = ShadowDecoder::new(base.hx(), t / 2, spec.budget)?;
    let reducer = ShortCosetReducer::new(base.hz(), t, DEFAULT_COSET_GUARD)?;
    let l = &thick.layout;
    let bulk = thick.bulk_qubits();
    let (sheet, inter): (Vec<usize>, Vec<usize>) = bulk
        .iter()
        .partition(|&&q| matches!(l.site(q), QubitSite::Sheet { .. }));
    let mut intrinsic = vec![BinaryVector::zeros(l.n_total())];
    for i in 0..spec.intrinsic_samples {
        intrinsic.push(sample_intrinsic_error(thick, &mut trial_rng(spec.seed, 0, i, Stream::Intrinsic)));
    }

    let subsets = |universe: &[usize], max: usize| -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        let none = BinaryMatrix::zeros(0, universe.len());
        let walker = SubsetWalker::new(&none);
        let empty = BinaryVector::zeros(0);
        for w in 1..=max.min(universe.len()) {
            let _ = walker.walk::<()>(w, &empty, |s, _| {
                out.push(s.iter().map(|&i| universe[i]).collect());
                ControlFlow::Continue(())
            });
        }
        out
    };
    let es = subsets(&sheet, e_max);
    let ss = subsets(&inter, s_max);
    for e_sup in &es {
        for s_sup in &ss {
            let mut err = BinaryVector::zeros(l.n_total());
            for &q in e_sup.iter().chain(s_sup) {
                err.set(q, true);
            }
            for (k, o) in intrinsic.iter().enumerate() {
                let mut outcomes = o.clone();
                outcomes ^= &err;
                let view = reconstruct_sheet_views(thick, &outcomes)?;
                let case = || format!("E={e_sup:?} S_e={s_sup:?} intrinsic #{k}");
                match collapse(thick, &view, &mut shadow) {
                    Ok(c) => {
                        for (ep, z) in &c.endpoints {
                            let mut r = l.sheet_part(o, *ep);
                            r ^= z;
                            report.record(reducer.min_weight(&r), bound, case);
                        }
                    }
                    Err(Error::NoRepairWithinRadius { .. }) => report.fail(format!("{} : no repair", case())),
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(report)
}

/// Both residual bounds of the full protocol.
///
/// The X part is the stage-1 suite restricted to each endpoint sheet and reduced
/// over the base X stabilizers, for `|s_e| <= d/2`. The Z part is the stage-2 suite
/// with bound `d/4`.
pub fn composition_suite(
    setup: &ProtocolSetup,
    d: usize,
    stage2: &Stage2BoundSpec,
    budget: u128,
) -> Result<(BoundReport, BoundReport)> {
    let thick = &setup.thick;
    let exact = ExactStage1::new(thick, budget);
    let reducer = CosetReducer::new(setup.base().hx(), DEFAULT_COSET_GUARD)?;
    let mut x = BoundReport::new("output X residual <= 2|s_e|^3");
    let rows = thick.code.hz().rows();
    let set = SyndromeErrorSet {
        exhaustive_max: d / 2,
        sampled: None,
    };
    each_syndrome_error(rows, &set, |support| {
        let s_e = BinaryVector::from_support(rows, support)?;
        match exact.residual(&s_e) {
            Ok(r) => {
                let bound = 2.0 * (support.len() as f64).powi(3);
                for &ep in setup.endpoints() {
                    let w = reducer.min_weight(&thick.layout.sheet_part(&r, ep));
                    x.record(w, bound, || format!("s_e={support:?} endpoint {ep} weight {w}"));
                }
            }
            Err(Error::SyndromeNotInImage) => x.fail(format!("s_e={support:?}: repair left the image")),
            Err(e) => return Err(e),
        }
        Ok(())
    })?;
    let mut spec = stage2.clone();
    spec.bound = Some(d as f64 / 4.0);
    let mut z = stage2_bound_suite(setup, &spec)?;
    z.name = format!("output Z residual <= d/4 = {}", d as f64 / 4.0);
    Ok((x, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::causal::Thickening;
    use crate::codes::classical::repetition_code;
    use crate::codes::hgp::hypergraph_product;
    use crate::protocol::simulate::Basis;

    fn setup(d: usize, ell: usize) -> ProtocolSetup {
        let r = repetition_code(d).unwrap();
        ProtocolSetup::from_hgp(&hypergraph_product(&r, &r).unwrap(), &Thickening::repetition(ell).unwrap(), Basis::Plus)
            .unwrap()
    }

    #[test]
    fn stage1_single_flips() {
        let s = setup(3, 3);
        let set = SyndromeErrorSet {
            exhaustive_max: 1,
            sampled: Some((2, 50, 1)),
        };
        let r = stage1_bound_suite(&s.thick, &set, 1 << 30).unwrap();
        assert!(r.passed, "{}", r.summary());
        assert_eq!(r.cases, 44 + 50);
    }

    #[test]
    fn stage2_surface_code() {
        let s = setup(5, 3);
        let spec = Stage2BoundSpec {
            t: 4,
            f: None,
            intrinsic_samples: 2,
            seed: 5,
            bound: None,
            budget: 1 << 30,
        };
        let r = stage2_bound_suite(&s, &spec).unwrap();
        assert!(r.passed, "{}", r.summary());
        assert!(r.cases > 0);
    }

    #[test]
    fn unconfined_hypothesis_reported() {
        let s = setup(3, 2);
        let spec = Stage2BoundSpec {
            t: 3,
            f: None,
            intrinsic_samples: 0,
            seed: 0,
            bound: None,
            budget: 1 << 30,
        };
        let r = stage2_bound_suite(&s, &spec).unwrap();
        assert!(!r.passed);
        assert!(r.note.contains("hypotheses fail"));
    }
}
