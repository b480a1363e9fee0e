use rayon::prelude::*;

use crate::codes::classical::repetition_code;
use crate::codes::css::CssCode;
use crate::decoders::{BpOsdDecoder, DecoderConfig, MetacheckDecoder, SyndromeDecoder};
use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BinaryVector};
use crate::protocol::adjudicate::final_decode_and_adjudicate;
use crate::protocol::noise::{prior, NoiseModel};
use crate::protocol::rng::{bernoulli_vector, trial_rng, Stream};
use crate::protocol::simulate::{Estimate, PointResult, RunSpec};

/// Detector matrix of `rounds` noisy measurements of `H_Z`.
///
/// Columns are measurement flips `(b, z)` at `z*rounds + b`, then data X errors
/// between rounds `j` and `j+1` at `m_Z*rounds + q*(rounds-1) + j`. Detector `(j, z)`
/// at `z*(rounds-1) + j` compares rounds `j` and `j+1`.
pub fn spacetime_detector_matrix(hz: &BinaryMatrix, rounds: usize) -> Result<BinaryMatrix> {
    let h = repetition_code(rounds)?.h().clone();
    let (mz, n) = hz.shape();
    let r = rounds - 1;
    BinaryMatrix::block_compose_sized(
        &[vec![
            Some(&BinaryMatrix::tensor_product(&BinaryMatrix::identity(mz), &h)?),
            Some(&BinaryMatrix::tensor_product(hz, &BinaryMatrix::identity(r))?),
        ]],
        &[mz * r],
        &[mz * rounds, n * r],
    )
}

/// Decoders for the baseline at one noise point.
#[derive(Clone, Debug)]
pub struct BaselineDecoders {
    detectors: BinaryMatrix,
    history: Option<BpOsdDecoder>,
    last_round: MetacheckDecoder,
    final_x: BpOsdDecoder,
}

impl BaselineDecoders {
    pub fn new(base: &CssCode, rounds: usize, noise: &NoiseModel, cfg: &DecoderConfig) -> Result<Self> {
        if rounds == 0 {
            return Err(Error::InvalidParameter("at least one round is needed".into()));
        }
        noise.validate()?;
        let hz = base.hz();
        let detectors = spacetime_detector_matrix(hz, rounds)?;
        let p = prior(noise.p_synd);
        let history = if detectors.rows() > 0 {
            Some(BpOsdDecoder::new(&detectors, cfg.bp.clone().with_prior(p), cfg.osd)?)
        } else {
            None
        };
        let last_round = MetacheckDecoder::new(hz, &BinaryMatrix::zeros(0, hz.rows()), cfg, p, p)?;
        let final_x = BpOsdDecoder::new(hz, cfg.bp.clone().with_prior(prior(noise.p_data)), cfg.osd)?;
        Ok(Self {
            detectors,
            history,
            last_round,
            final_x,
        })
    }
}

/// One baseline trial; returns the X̄ failure verdict.
///
/// Round 0 is the last. Measurements flip at `p_synd`; with `data_between_rounds`
/// X errors also occur at `p_synd` between rounds, one per detector column. The
/// history decode estimates both; the correction is the accumulated data estimate
/// plus a decode of the last round's remaining syndrome. Fresh X errors at `p_data`
/// are then added and a perfect round adjudicates.
#[allow(clippy::too_many_arguments)]
pub fn baseline_trial(
    base: &CssCode,
    lz: &BinaryMatrix,
    rounds: usize,
    dec: &mut BaselineDecoders,
    noise: &NoiseModel,
    data_between_rounds: bool,
    master: u64,
    point: u64,
    trial: u64,
) -> Result<bool> {
    let hz = base.hz();
    let (mz, n) = hz.shape();
    let gaps = rounds - 1;
    let mut rng = trial_rng(master, point, trial, Stream::Baseline);
    let flips = bernoulli_vector(&mut rng, mz * rounds, noise.p_synd);
    let p_between = if data_between_rounds { noise.p_synd } else { 0.0 };
    let between = bernoulli_vector(&mut rng, n * gaps, p_between);

    // Accumulated data error seen by round b is the sum of D_j for j >= b.
    let mut seen = vec![BinaryVector::zeros(n); rounds];
    for b in (0..gaps).rev() {
        let mut acc = seen[b + 1].clone();
        for q in 0..n {
            if between.get(q * gaps + b) {
                acc.flip(q);
            }
        }
        seen[b] = acc;
    }
    let mut history = BinaryVector::zeros(mz * rounds + n * gaps);
    for (b, e) in seen.iter().enumerate() {
        let s = hz.mul_vec(e);
        for z in 0..mz {
            if s.get(z) ^ flips.get(z * rounds + b) {
                history.set(z * rounds + b, true);
            }
        }
    }

    let mut last = BinaryVector::zeros(mz);
    for z in 0..mz {
        if history.get(z * rounds) {
            last.set(z, true);
        }
    }
    let mut data_fix = BinaryVector::zeros(n);
    if let Some(h) = dec.history.as_mut() {
        let det = dec.detectors.mul_vec(&history);
        if !det.is_zero() {
            let fix = h.decode(&det)?.correction;
            for z in 0..mz {
                if fix.get(z * rounds) {
                    last.flip(z);
                }
            }
            for q in 0..n {
                let parity = (0..gaps).filter(|&j| fix.get(mz * rounds + q * gaps + j)).count() % 2;
                if parity == 1 {
                    data_fix.flip(q);
                }
            }
            last ^= &hz.mul_vec(&data_fix);
        }
    }
    let mut residual = seen[0].clone();
    residual ^= &data_fix;
    residual ^= &dec.last_round.decode(&last)?.correction;
    let mut rng = trial_rng(master, point, trial, Stream::Final);
    residual ^= &bernoulli_vector(&mut rng, n, noise.p_data);
    Ok(final_decode_and_adjudicate(&mut dec.final_x, lz, &residual)?.0)
}

/// Repeated-measurement preparation of the unthickened code, decoded over the full history.
pub fn repeated_measurement_baseline(
    base: &CssCode,
    rounds: usize,
    noise: &NoiseModel,
    data_between_rounds: bool,
    cfg: &DecoderConfig,
    spec: &RunSpec,
) -> Result<PointResult> {
    let lz = base
        .lz()
        .ok_or_else(|| Error::InvalidParameter("base code has no logical basis".into()))?
        .clone();
    let proto = BaselineDecoders::new(base, rounds, noise, cfg)?;
    let x = (0..spec.trials)
        .into_par_iter()
        .map_init(
            || proto.clone(),
            |dec, t| baseline_trial(base, &lz, rounds, dec, noise, data_between_rounds, spec.master_seed, spec.point, t),
        )
        .try_fold(Estimate::default, |mut acc, fail| {
            fail.map(|f| {
                acc.trials += 1;
                acc.failures += f as u64;
                acc
            })
        })
        .try_reduce(Estimate::default, |a, b| {
            Ok(Estimate {
                trials: a.trials + b.trials,
                failures: a.failures + b.failures,
            })
        })?;
    Ok(PointResult {
        x,
        z: Estimate {
            trials: x.trials,
            failures: 0,
        },
        any: x,
        fallbacks: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::causal::Thickening;
    use crate::codes::hgp::{hgp_logicals, hypergraph_product};
    use crate::codes::thicken::thicken;

    fn base() -> CssCode {
        let r3 = repetition_code(3).unwrap();
        let hgp = hypergraph_product(&r3, &r3).unwrap();
        let (lx, lz) = hgp_logicals(&hgp).unwrap();
        hgp.code.with_logicals(lx, lz).unwrap()
    }

    #[test]
    fn detectors_match_thickened_metachecks() {
        let b = base();
        for rounds in 1..5 {
            let t = thicken(&b, &Thickening::repetition(rounds).unwrap()).unwrap();
            assert_eq!(&spacetime_detector_matrix(b.hz(), rounds).unwrap(), t.mz());
        }
    }

    #[test]
    fn noiseless_baseline_never_fails() {
        let b = base();
        let spec = RunSpec {
            trials: 20,
            master_seed: 0,
            point: 0,
        };
        let r = repeated_measurement_baseline(&b, 3, &NoiseModel::noiseless(), true, &DecoderConfig::default(), &spec).unwrap();
        assert_eq!(r.x.failures, 0);
        assert_eq!(r.x.trials, 20);
    }
}
