use crate::decoders::bp::{llr, BpConfig, BpDecoder};
use crate::decoders::osd::{osd_postprocess, OsdConfig};
use crate::decoders::{DecodeResult, SyndromeDecoder};
use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BinaryVector};

/// BP followed by OSD whenever BP fails to reproduce the syndrome.
#[derive(Clone, Debug)]
pub struct BpOsdDecoder {
    bp: BpDecoder,
    osd: OsdConfig,
    cost: Vec<f64>,
}

impl BpOsdDecoder {
    pub fn new(h: &BinaryMatrix, bp: BpConfig, osd: OsdConfig) -> Result<Self> {
        bp.validate()?;
        let priors = vec![bp.channel_prior; h.cols()];
        Self::with_priors(h, bp, osd, &priors)
    }

    /// Per-bit priors; a zero prior forbids the bit in OSD candidates.
    pub fn with_priors(h: &BinaryMatrix, bp: BpConfig, osd: OsdConfig, priors: &[f64]) -> Result<Self> {
        let sat = bp.saturation;
        let bp = BpDecoder::with_priors(h, bp, priors)?;
        let cost = priors
            .iter()
            .map(|&p| if p == 0.0 { f64::INFINITY } else { llr(p, sat) })
            .collect();
        Ok(Self { bp, osd, cost })
    }
}

impl SyndromeDecoder for BpOsdDecoder {
    fn h(&self) -> &BinaryMatrix {
        self.bp.h()
    }

    fn decode(&mut self, s: &BinaryVector) -> Result<DecodeResult> {
        let out = self.bp.decode(s)?;
        if out.converged {
            return Ok(DecodeResult {
                correction: out.correction,
                converged: true,
                soft_reliabilities: out.posterior,
                iterations: out.iterations,
                osd_used: false,
            });
        }
        let correction = osd_postprocess(self.bp.h(), s, &out.posterior, &self.cost, &self.osd)?;
        assert_eq!(
            &self.bp.h().mul_vec(&correction),
            s,
            "OSD returned a correction with the wrong syndrome"
        );
        Ok(DecodeResult {
            correction,
            converged: false,
            soft_reliabilities: out.posterior,
            iterations: out.iterations,
            osd_used: true,
        })
    }
}

/// Decodes a noisy syndrome against `(H | I)`: data errors plus syndrome flips.
///
/// Columns are held internally as `(I | H)` so that reliability ties favour
/// explaining a check by a measurement flip.
#[derive(Clone, Debug)]
pub struct SingleShotDecoder {
    inner: BpOsdDecoder,
    n_data: usize,
    m: usize,
}

#[derive(Clone, Debug)]
pub struct SingleShotResult {
    pub data_correction: BinaryVector,
    pub syndrome_error: BinaryVector,
    pub detail: DecodeResult,
}

impl SingleShotDecoder {
    pub fn new(h: &BinaryMatrix, bp: BpConfig, osd: OsdConfig, p_data: f64, p_synd: f64) -> Result<Self> {
        let (m, n) = h.shape();
        let aug = BinaryMatrix::identity(m).hstack(h)?;
        let mut priors = vec![p_synd; m];
        priors.extend(std::iter::repeat(p_data).take(n));
        Ok(Self {
            inner: BpOsdDecoder::with_priors(&aug, bp, osd, &priors)?,
            n_data: n,
            m,
        })
    }

    pub fn decode(&mut self, s: &BinaryVector) -> Result<SingleShotResult> {
        let detail = self.inner.decode(s)?;
        let syndrome_error = detail.correction.slice(0, self.m);
        let data_correction = detail.correction.slice(self.m, self.n_data);
        Ok(SingleShotResult {
            data_correction,
            syndrome_error,
            detail,
        })
    }
}

pub fn single_shot_decode(
    h: &BinaryMatrix,
    s: &BinaryVector,
    bp: &BpConfig,
    osd: &OsdConfig,
) -> Result<(BinaryVector, BinaryVector)> {
    let p = bp.channel_prior;
    let r = SingleShotDecoder::new(h, bp.clone(), *osd, p, p)?.decode(s)?;
    Ok((r.data_correction, r.syndrome_error))
}

/// Two-stage decoding with metachecks `M` (`M H = 0`).
///
/// Stage (i) decodes the metasyndrome `M s` against `M` and repairs `s`; stage (ii)
/// decodes the repaired syndrome against `H`. If the repaired syndrome still lies
/// outside `im H`, its pairing with the left null space of `H` is decoded away and
/// the event is flagged.
#[derive(Clone, Debug)]
pub struct MetacheckDecoder {
    m: BinaryMatrix,
    meta: Option<BpOsdDecoder>,
    main: BpOsdDecoder,
    left_null: BinaryMatrix,
    repair: Option<BpOsdDecoder>,
}

#[derive(Clone, Debug)]
pub struct TwoStageResult {
    /// `ŝ`, the flips applied to the observed syndrome.
    pub syndrome_repair: BinaryVector,
    pub repaired_syndrome: BinaryVector,
    pub correction: BinaryVector,
    pub fallback_used: bool,
    pub main: DecodeResult,
}

#[derive(Clone, Debug)]
pub struct DecoderConfig {
    pub bp: BpConfig,
    pub osd: OsdConfig,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            bp: BpConfig::default(),
            osd: OsdConfig::default(),
        }
    }
}

impl MetacheckDecoder {
    /// `p_data` is the prior on columns of `H`, `p_synd` the prior on checks.
    pub fn new(h: &BinaryMatrix, m: &BinaryMatrix, cfg: &DecoderConfig, p_data: f64, p_synd: f64) -> Result<Self> {
        if m.cols() != h.rows() {
            return Err(Error::DimensionMismatch {
                op: "metacheck decoder",
                left_rows: m.rows(),
                left_cols: m.cols(),
                right_rows: h.rows(),
                right_cols: h.cols(),
            });
        }
        if !m.matmul(h)?.is_zero() {
            return Err(Error::InvalidParameter("M H != 0".into()));
        }
        let bp = |p: f64| cfg.bp.clone().with_prior(p);
        let meta = if m.rows() > 0 {
            Some(BpOsdDecoder::new(m, bp(p_synd), cfg.osd)?)
        } else {
            None
        };
        let main = BpOsdDecoder::new(h, bp(p_data), cfg.osd)?;
        let left_null = h.left_kernel_basis();
        let repair = if left_null.rows() > 0 {
            Some(BpOsdDecoder::new(&left_null, bp(p_synd), cfg.osd)?)
        } else {
            None
        };
        Ok(Self {
            m: m.clone(),
            meta,
            main,
            left_null,
            repair,
        })
    }

    pub fn h(&self) -> &BinaryMatrix {
        self.main.h()
    }

    pub fn decode(&mut self, observed: &BinaryVector) -> Result<TwoStageResult> {
        let mut repair = BinaryVector::zeros(observed.len());
        if let Some(meta) = self.meta.as_mut() {
            let metasyndrome = self.m.mul_vec(observed);
            if !metasyndrome.is_zero() {
                repair = meta.decode(&metasyndrome)?.correction;
            }
        }
        let mut repaired = observed.clone();
        repaired ^= &repair;
        let mut fallback_used = false;
        let residue = self.left_null.mul_vec(&repaired);
        if !residue.is_zero() {
            let fix = self
                .repair
                .as_mut()
                .expect("nonzero residue implies a left null space")
                .decode(&residue)?
                .correction;
            repaired ^= &fix;
            repair ^= &fix;
            fallback_used = true;
        }
        let main = self.main.decode(&repaired)?;
        Ok(TwoStageResult {
            syndrome_repair: repair,
            repaired_syndrome: repaired,
            correction: main.correction.clone(),
            fallback_used,
            main,
        })
    }
}

/// One-shot wrapper: returns the repaired syndrome and the correction.
pub fn two_stage_metacheck_decode(
    h: &BinaryMatrix,
    m: &BinaryMatrix,
    observed: &BinaryVector,
    cfg: &DecoderConfig,
) -> Result<(BinaryVector, BinaryVector)> {
    let p = cfg.bp.channel_prior;
    let r = MetacheckDecoder::new(h, m, cfg, p, p)?.decode(observed)?;
    Ok((r.repaired_syndrome, r.correction))
}
