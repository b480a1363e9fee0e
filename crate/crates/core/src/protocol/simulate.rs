use rayon::prelude::*;

use crate::codes::causal::Thickening;
use crate::codes::css::CssCode;
use crate::codes::hgp::{hgp_logicals, HgpCode};
use crate::codes::thicken::{thicken, ThickenedCode};
use crate::decoders::{BpOsdDecoder, DecoderConfig, MetacheckDecoder, SingleShotDecoder, SyndromeDecoder};
use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BinaryVector};
use crate::protocol::adjudicate::final_decode_and_adjudicate;
use crate::protocol::noise::{prior, NoiseModel, ProtocolOptions};
use crate::protocol::rng::{bernoulli_vector, trial_rng, Stream};
use crate::protocol::stage1::{stage1_simulate, Stage1Outcome};
use crate::protocol::stage2::{collapse, reconstruct_sheet_views, sample_intrinsic_error, Collapse, TrustOutcomes};

/// Target logical basis state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Basis {
    #[default]
    Plus,
    /// Runs the protocol on the code with X and Z exchanged.
    Zero,
}

/// A thickened code ready for simulation.
#[derive(Clone, Debug)]
pub struct ProtocolSetup {
    pub thick: ThickenedCode,
    /// X logicals of the base code.
    pub lx: BinaryMatrix,
    /// Z logicals of the base code.
    pub lz: BinaryMatrix,
    bulk_checks: Vec<usize>,
    bulk_qubits: Vec<usize>,
}

impl ProtocolSetup {
    /// `base` must carry logicals.
    pub fn new(base: &CssCode, thickening: &Thickening) -> Result<Self> {
        let (lx, lz) = match (base.lx(), base.lz()) {
            (Some(lx), Some(lz)) => (lx.clone(), lz.clone()),
            _ => return Err(Error::InvalidParameter("base code has no logical basis".into())),
        };
        let thick = thicken(base, thickening)?;
        let l = &thick.layout;
        let causal = &thick.thickening.causal;
        let bulk_checks = (0..l.mx)
            .flat_map(|x| (0..l.bits).map(move |b| (b, x)))
            .filter(|&(b, _)| !causal.is_endpoint(b))
            .map(|(b, x)| l.sheet_x_check(b, x))
            .collect::<Vec<_>>();
        let mut bulk_checks = bulk_checks;
        bulk_checks.sort_unstable();
        let bulk_qubits = thick.bulk_qubits();
        Ok(Self {
            thick,
            lx,
            lz,
            bulk_checks,
            bulk_qubits,
        })
    }

    pub fn from_hgp(hgp: &HgpCode, thickening: &Thickening, basis: Basis) -> Result<Self> {
        let (lx, lz) = hgp_logicals(hgp)?;
        let base = hgp.code.clone().with_logicals(lx, lz)?;
        match basis {
            Basis::Plus => Self::new(&base, thickening),
            Basis::Zero => Self::new(&base.dual(), thickening),
        }
    }

    pub fn base(&self) -> &CssCode {
        &self.thick.base
    }

    pub fn endpoints(&self) -> &[usize] {
        &self.thick.thickening.causal.endpoints
    }

    /// X-checks of the measured bulk restricted to bulk qubits.
    pub fn bulk_check_matrix(&self) -> BinaryMatrix {
        self.thick
            .code
            .hx()
            .select_rows(&self.bulk_checks)
            .select_cols(&self.bulk_qubits)
    }
}

/// Decoders for one noise point; cloned once per worker.
#[derive(Clone, Debug)]
pub struct ProtocolDecoders {
    pub stage1: MetacheckDecoder,
    pub sheet: SingleShotDecoder,
    pub bulk: Option<BpOsdDecoder>,
    /// Detects X errors on a boundary sheet (base `H_Z`).
    pub final_x: BpOsdDecoder,
    /// Detects Z errors on a boundary sheet (base `H_X`).
    pub final_z: BpOsdDecoder,
}

impl ProtocolDecoders {
    pub fn new(setup: &ProtocolSetup, noise: &NoiseModel, opts: &ProtocolOptions, cfg: &DecoderConfig) -> Result<Self> {
        noise.validate()?;
        let thick = &setup.thick;
        let base = setup.base();
        let p_synd = prior(noise.p_synd);
        let p_stage1_data = if opts.stage1_data_noise {
            prior(noise.p_data)
        } else {
            p_synd
        };
        let stage1 = MetacheckDecoder::new(thick.code.hz(), thick.mz(), cfg, p_stage1_data, p_synd)?;
        let p = prior(noise.p_data);
        let sheet = SingleShotDecoder::new(base.hx(), cfg.bp.clone(), cfg.osd, p, p)?;
        let bulk = if opts.whole_bulk {
            Some(BpOsdDecoder::new(&setup.bulk_check_matrix(), cfg.bp.clone().with_prior(p), cfg.osd)?)
        } else {
            None
        };
        let final_x = BpOsdDecoder::new(base.hz(), cfg.bp.clone().with_prior(p), cfg.osd)?;
        let final_z = BpOsdDecoder::new(base.hx(), cfg.bp.clone().with_prior(p), cfg.osd)?;
        Ok(Self {
            stage1,
            sheet,
            bulk,
            final_x,
            final_z,
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct ProtocolTrace {
    pub stage1: Option<Stage1Outcome>,
    pub intrinsic: Option<BinaryVector>,
    pub bulk_error: Option<BinaryVector>,
    pub collapse: Option<Collapse>,
    /// X residual on each endpoint sheet before the final decode.
    pub boundary_x: Vec<BinaryVector>,
    /// Z residual on each endpoint sheet before the final decode.
    pub boundary_z: Vec<BinaryVector>,
    pub final_x_correction: Vec<BinaryVector>,
    pub final_z_correction: Vec<BinaryVector>,
}

#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub x_fail: bool,
    pub z_fail: bool,
    pub fallback_used: bool,
    pub trace: Option<ProtocolTrace>,
}

/// One trial of the two-stage preparation; failures are per block (any endpoint).
#[allow(clippy::too_many_arguments)]
pub fn run_trial(
    setup: &ProtocolSetup,
    dec: &mut ProtocolDecoders,
    noise: &NoiseModel,
    opts: &ProtocolOptions,
    master: u64,
    point: u64,
    trial: u64,
    keep_trace: bool,
) -> Result<TrialOutcome> {
    let thick = &setup.thick;
    let l = &thick.layout;
    let mut trace = ProtocolTrace::default();
    let mut out = TrialOutcome {
        x_fail: false,
        z_fail: false,
        fallback_used: false,
        trace: None,
    };

    if opts.stage1_noisy() {
        let mut rng = trial_rng(master, point, trial, Stream::Stage1);
        let p_data = if opts.stage1_data_noise { noise.p_data } else { 0.0 };
        let s1 = stage1_simulate(thick, &mut dec.stage1, p_data, noise.p_synd, &mut rng)?;
        out.fallback_used = s1.fallback_used;
        let mut rng = trial_rng(master, point, trial, Stream::Final);
        for &e in setup.endpoints() {
            let mut r = l.sheet_part(&s1.residual, e);
            if opts.fresh_boundary_x {
                r ^= &bernoulli_vector(&mut rng, l.n, noise.p_data);
            }
            let (fail, c) = final_decode_and_adjudicate(&mut dec.final_x, &setup.lz, &r)?;
            out.x_fail |= fail;
            if keep_trace {
                trace.boundary_x.push(r);
                trace.final_x_correction.push(c);
            }
        }
        if keep_trace {
            trace.stage1 = Some(s1);
        }
    }

    if opts.stage2_noisy() {
        let intrinsic = sample_intrinsic_error(thick, &mut trial_rng(master, point, trial, Stream::Intrinsic));
        let mut rng = trial_rng(master, point, trial, Stream::Stage2);
        let mut bulk_error = BinaryVector::zeros(l.n_total());
        for &q in &setup.bulk_qubits {
            if noise.p_data > 0.0 && rand::Rng::gen::<f64>(&mut rng) < noise.p_data {
                bulk_error.set(q, true);
            }
        }
        let mut outcomes = intrinsic.clone();
        outcomes ^= &bulk_error;
        let c = match dec.bulk.as_mut() {
            Some(bulk) => {
                let restricted = select(&outcomes, &setup.bulk_qubits);
                let corr = bulk.decode(&bulk.h().mul_vec(&restricted))?.correction;
                for (i, &q) in setup.bulk_qubits.iter().enumerate() {
                    if corr.get(i) {
                        outcomes.flip(q);
                    }
                }
                let view = reconstruct_sheet_views(thick, &outcomes)?;
                collapse(thick, &view, &mut TrustOutcomes { n: l.n, m: l.mx })?
            }
            None => {
                let view = reconstruct_sheet_views(thick, &outcomes)?;
                collapse(thick, &view, &mut dec.sheet)?
            }
        };
        for (e, z) in &c.endpoints {
            let mut r = l.sheet_part(&intrinsic, *e);
            r ^= z;
            let (fail, corr) = final_decode_and_adjudicate(&mut dec.final_z, &setup.lx, &r)?;
            out.z_fail |= fail;
            if keep_trace {
                trace.boundary_z.push(r);
                trace.final_z_correction.push(corr);
            }
        }
        if keep_trace {
            trace.intrinsic = Some(intrinsic);
            trace.bulk_error = Some(bulk_error);
            trace.collapse = Some(c);
        }
    }

    if keep_trace {
        out.trace = Some(trace);
    }
    Ok(out)
}

fn select(v: &BinaryVector, idx: &[usize]) -> BinaryVector {
    let mut out = BinaryVector::zeros(idx.len());
    for (i, &q) in idx.iter().enumerate() {
        if v.get(q) {
            out.set(i, true);
        }
    }
    out
}

/// A failure count with its binomial standard error `sqrt(p(1-p)/N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Estimate {
    pub trials: u64,
    pub failures: u64,
}

impl Estimate {
    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.failures as f64 / self.trials as f64
        }
    }

    pub fn stderr(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        let p = self.rate();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct PointResult {
    pub x: Estimate,
    pub z: Estimate,
    /// Trials with a failure in either sector.
    pub any: Estimate,
    pub fallbacks: u64,
}

impl PointResult {
    fn record(&mut self, x_fail: bool, z_fail: bool, fallback: bool) {
        for e in [&mut self.x, &mut self.z, &mut self.any] {
            e.trials += 1;
        }
        self.x.failures += x_fail as u64;
        self.z.failures += z_fail as u64;
        self.any.failures += (x_fail || z_fail) as u64;
        self.fallbacks += fallback as u64;
    }

    fn merge(mut self, o: PointResult) -> PointResult {
        for (a, b) in [(&mut self.x, o.x), (&mut self.z, o.z), (&mut self.any, o.any)] {
            a.trials += b.trials;
            a.failures += b.failures;
        }
        self.fallbacks += o.fallbacks;
        self
    }
}

/// Trial budget and seeding for one point of a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunSpec {
    pub trials: u64,
    pub master_seed: u64,
    pub point: u64,
}

/// Runs `spec.trials` trials in parallel on the current rayon pool.
///
/// Trial `i` draws from seeds derived from `(master_seed, point, i)`, so the result
/// does not depend on the number of workers.
pub fn full_protocol_simulate(
    setup: &ProtocolSetup,
    noise: &NoiseModel,
    opts: &ProtocolOptions,
    cfg: &DecoderConfig,
    spec: &RunSpec,
) -> Result<PointResult> {
    let proto = ProtocolDecoders::new(setup, noise, opts, cfg)?;
    (0..spec.trials)
        .into_par_iter()
        .map_init(
            || proto.clone(),
            |dec, t| {
                run_trial(setup, dec, noise, opts, spec.master_seed, spec.point, t, false).map(|o| {
                    let mut r = PointResult::default();
                    r.record(o.x_fail, o.z_fail, o.fallback_used);
                    r
                })
            },
        )
        .try_reduce(PointResult::default, |a, b| Ok(a.merge(b)))
}

/// Runs `f` on a dedicated pool with `workers` threads (0 means rayon's default).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::classical::repetition_code;
    use crate::codes::hgp::hypergraph_product;
    use crate::protocol::noise::Experiment;

    fn setup(t: Thickening) -> ProtocolSetup {
        let r3 = repetition_code(3).unwrap();
        ProtocolSetup::from_hgp(&hypergraph_product(&r3, &r3).unwrap(), &t, Basis::Plus).unwrap()
    }

    #[test]
    fn noiseless_full_protocol() {
        for t in [Thickening::repetition(3).unwrap(), Thickening::star(3, 2).unwrap()] {
            let s = setup(t);
            let opts = ProtocolOptions::new(Experiment::Full);
            let noise = NoiseModel::noiseless();
            let mut dec = ProtocolDecoders::new(&s, &noise, &opts, &DecoderConfig::default()).unwrap();
            for trial in 0..10 {
                let o = run_trial(&s, &mut dec, &noise, &opts, 1, 0, trial, true).unwrap();
                assert!(!o.x_fail && !o.z_fail);
                let tr = o.trace.unwrap();
                assert_eq!(tr.boundary_z.len(), s.endpoints().len());
                for r in &tr.boundary_z {
                    assert!(s.base().hx().mul_vec(r).is_zero());
                    assert!(s.lx.mul_vec(r).is_zero());
                }
                assert!(tr.boundary_x.iter().all(|r| r.is_zero()));
            }
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let s = setup(Thickening::repetition(3).unwrap());
        let opts = ProtocolOptions::new(Experiment::Full);
        let noise = NoiseModel::uniform(0.05);
        let spec = RunSpec {
            trials: 60,
            master_seed: 11,
            point: 2,
        };
        let cfg = DecoderConfig::default();
        let a = with_workers(1, || full_protocol_simulate(&s, &noise, &opts, &cfg, &spec)).unwrap().unwrap();
        let b = with_workers(3, || full_protocol_simulate(&s, &noise, &opts, &cfg, &spec)).unwrap().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.any.trials, 60);
    }

    #[test]
    fn whole_bulk_variant_runs() {
        let s = setup(Thickening::repetition(3).unwrap());
        let mut opts = ProtocolOptions::new(Experiment::ZSector);
        opts.whole_bulk = true;
        let noise = NoiseModel::noiseless();
        let mut dec = ProtocolDecoders::new(&s, &noise, &opts, &DecoderConfig::default()).unwrap();
        let o = run_trial(&s, &mut dec, &noise, &opts, 0, 0, 0, false).unwrap();
        assert!(!o.z_fail);
    }

    #[test]
    fn estimate_stderr() {
        let e = Estimate { trials: 100, failures: 10 };
        assert!((e.rate() - 0.1).abs() < 1e-12);
        assert!((e.stderr() - 0.03).abs() < 1e-12);
    }
}
