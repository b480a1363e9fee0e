use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BinaryVector};

/// Min-sum belief propagation settings.
#[derive(Clone, Debug, PartialEq)]
pub struct BpConfig {
    pub max_iters: usize,
    /// Default per-bit error probability when no prior vector is given.
    pub channel_prior: f64,
    /// Messages and posteriors are clamped to `±saturation`.
    pub saturation: f64,
}

impl Default for BpConfig {
    fn default() -> Self {
        Self {
            max_iters: 20,
            channel_prior: 0.01,
            saturation: 30.0,
        }
    }
}

impl BpConfig {
    pub fn with_prior(mut self, p: f64) -> Self {
        self.channel_prior = p;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_schedule()?;
        if !(self.channel_prior > 0.0 && self.channel_prior < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "channel prior {} outside (0, 1/2)",
                self.channel_prior
            )));
        }
        Ok(())
    }

    fn validate_schedule(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be at least 1".into()));
        }
        if !(self.saturation > 0.0) {
            return Err(Error::InvalidParameter("saturation must be positive".into()));
        }
        Ok(())
    }
}

/// Log-likelihood ratio `ln((1-p)/p)`, clamped to `±saturation`.
pub fn llr(p: f64, saturation: f64) -> f64 {
    if p <= 0.0 {
        return saturation;
    }
    if p >= 1.0 {
        return -saturation;
    }
    ((1.0 - p) / p).ln().clamp(-saturation, saturation)
}

#[derive(Clone, Debug)]
pub struct BpOutput {
    pub correction: BinaryVector,
    pub converged: bool,
    /// Posterior LLRs after the last iteration; negative means "likely flipped".
    pub posterior: Vec<f64>,
    pub iterations: usize,
}

/// Syndrome-based min-sum decoder with a flooding schedule.
///
/// Holds edge-indexed message buffers, so one instance serves one thread.
#[derive(Clone, Debug)]
pub struct BpDecoder {
    h: BinaryMatrix,
    cfg: BpConfig,
    prior: Vec<f64>,
    check_start: Vec<usize>,
    edge_var: Vec<usize>,
    var_start: Vec<usize>,
    var_edges: Vec<usize>,
    c2v: Vec<f64>,
    v2c: Vec<f64>,
}

impl BpDecoder {
    /// Uniform prior `cfg.channel_prior` on every bit.
    pub fn new(h: &BinaryMatrix, cfg: BpConfig) -> Result<Self> {
        cfg.validate()?;
        let priors = vec![cfg.channel_prior; h.cols()];
        Self::with_priors(h, cfg, &priors)
    }

    /// Per-bit error probabilities. A probability of 0 pins the bit to 0 (saturated LLR).
    pub fn with_priors(h: &BinaryMatrix, cfg: BpConfig, priors: &[f64]) -> Result<Self> {
        cfg.validate_schedule()?;
        if priors.len() != h.cols() {
            return Err(Error::LengthMismatch {
                op: "bp priors",
                expected: h.cols(),
                got: priors.len(),
            });
        }
        if let Some(p) = priors.iter().find(|p| !(0.0..0.5).contains(*p)) {
            return Err(Error::InvalidParameter(format!("prior {p} outside [0, 1/2)")));
        }
        let prior: Vec<f64> = priors.iter().map(|&p| llr(p, cfg.saturation)).collect();
        let mut check_start = Vec::with_capacity(h.rows() + 1);
        let mut edge_var = Vec::with_capacity(h.nnz());
        check_start.push(0);
        for r in 0..h.rows() {
            edge_var.extend_from_slice(h.row(r));
            check_start.push(edge_var.len());
        }
        let mut counts = vec![0usize; h.cols() + 1];
        for &v in &edge_var {
            counts[v + 1] += 1;
        }
        for i in 0..h.cols() {
            counts[i + 1] += counts[i];
        }
        let var_start = counts.clone();
        let mut fill = counts;
        let mut var_edges = vec![0; edge_var.len()];
        for (e, &v) in edge_var.iter().enumerate() {
            var_edges[fill[v]] = e;
            fill[v] += 1;
        }
        let edges = edge_var.len();
        Ok(Self {
            h: h.clone(),
            cfg,
            prior,
            check_start,
            edge_var,
            var_start,
            var_edges,
            c2v: vec![0.0; edges],
            v2c: vec![0.0; edges],
        })
    }

    pub fn h(&self) -> &BinaryMatrix {
        &self.h
    }

    pub fn config(&self) -> &BpConfig {
        &self.cfg
    }

    /// Channel LLRs per bit.
    pub fn prior_llr(&self) -> &[f64] {
        &self.prior
    }

    pub fn decode(&mut self, s: &BinaryVector) -> Result<BpOutput> {
        if s.len() != self.h.rows() {
            return Err(Error::LengthMismatch {
                op: "bp decode",
                expected: self.h.rows(),
                got: s.len(),
            });
        }
        let n = self.h.cols();
        let sat = self.cfg.saturation;
        if s.is_zero() {
            return Ok(BpOutput {
                correction: BinaryVector::zeros(n),
                converged: true,
                posterior: self.prior.clone(),
                iterations: 0,
            });
        }
        for (e, &v) in self.edge_var.iter().enumerate() {
            self.v2c[e] = self.prior[v];
        }
        let mut posterior = self.prior.clone();
        let mut hard = BinaryVector::zeros(n);
        for iter in 1..=self.cfg.max_iters {
            for c in 0..self.h.rows() {
                let (lo, hi) = (self.check_start[c], self.check_start[c + 1]);
                let mut negative = s.get(c);
                let (mut min1, mut min2, mut arg) = (f64::INFINITY, f64::INFINITY, lo);
                for e in lo..hi {
                    let m = self.v2c[e];
                    negative ^= m < 0.0;
                    let a = m.abs();
                    if a < min1 {
                        min2 = min1;
                        min1 = a;
                        arg = e;
                    } else if a < min2 {
                        min2 = a;
                    }
                }
                for e in lo..hi {
                    let mag = if e == arg { min2 } else { min1 };
                    let neg = negative ^ (self.v2c[e] < 0.0);
                    let mag = mag.min(sat);
                    self.c2v[e] = if neg { -mag } else { mag };
                }
            }
            for v in 0..n {
                let edges = &self.var_edges[self.var_start[v]..self.var_start[v + 1]];
                let total = self.prior[v] + edges.iter().map(|&e| self.c2v[e]).sum::<f64>();
                posterior[v] = total.clamp(-sat, sat);
                for &e in edges {
                    self.v2c[e] = (total - self.c2v[e]).clamp(-sat, sat);
                }
                hard.set(v, total < 0.0);
            }
            if self.satisfies(&hard, s) {
                return Ok(BpOutput {
                    correction: hard,
                    converged: true,
                    posterior,
                    iterations: iter,
                });
            }
        }
        Ok(BpOutput {
            correction: hard,
            converged: false,
            posterior,
            iterations: self.cfg.max_iters,
        })
    }

    fn satisfies(&self, x: &BinaryVector, s: &BinaryVector) -> bool {
        (0..self.h.rows()).all(|c| {
            let parity = self.edge_var[self.check_start[c]..self.check_start[c + 1]]
                .iter()
                .filter(|&&v| x.get(v))
                .count()
                & 1
                == 1;
            parity == s.get(c)
        })
    }
}

/// One-shot convenience wrapper around [`BpDecoder`].
pub fn bp_decode(h: &BinaryMatrix, s: &BinaryVector, cfg: &BpConfig) -> Result<BpOutput> {
    BpDecoder::new(h, cfg.clone())?.decode(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::classical::repetition_code;

    #[test]
    fn zero_syndrome() {
        let h = repetition_code(5).unwrap().h().clone();
        let out = bp_decode(&h, &BinaryVector::zeros(4), &BpConfig::default()).unwrap();
        assert!(out.converged && out.correction.is_zero());
    }

    #[test]
    fn single_error_on_repetition() {
        let h = repetition_code(5).unwrap().h().clone();
        let cfg = BpConfig::default().with_prior(0.01);
        for bit in 0..5 {
            let e = BinaryVector::from_support(5, &[bit]).unwrap();
            let out = bp_decode(&h, &h.mul_vec(&e), &cfg).unwrap();
            assert!(out.converged);
            assert!(out.iterations <= 2, "bit {bit}: {} iterations", out.iterations);
            assert_eq!(out.correction, e);
        }
    }

    #[test]
    fn four_cycle_trap_does_not_converge() {
        let h = BinaryMatrix::from_bitstrings(&["11", "11"]).unwrap();
        let s = BinaryVector::from_bitstring("11").unwrap();
        let out = bp_decode(&h, &s, &BpConfig::default()).unwrap();
        assert!(!out.converged);
    }

    #[test]
    fn rejects_bad_config() {
        let h = BinaryMatrix::identity(2);
        assert!(BpDecoder::new(&h, BpConfig::default().with_prior(0.5)).is_err());
        let cfg = BpConfig {
            max_iters: 0,
            ..BpConfig::default()
        };
        assert!(BpDecoder::new(&h, cfg).is_err());
    }

    #[test]
    fn llr_clamps() {
        assert_eq!(llr(0.0, 30.0), 30.0);
        assert!((llr(0.01, 30.0) - 99f64.ln()).abs() < 1e-12);
    }
}
