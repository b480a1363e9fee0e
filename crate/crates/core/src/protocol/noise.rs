use crate::error::{Error, Result};

/// Which part of the protocol is noisy and adjudicated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    /// Stage 1 under check-flip noise, fresh boundary X errors, X̄ verdict.
    XSector,
    /// Noiseless stage 1, Z errors on the measured bulk, Z̄ verdict.
    ZSector,
    /// Both stages noisy, both verdicts.
    Full,
}

impl Experiment {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "x" | "1" => Ok(Experiment::XSector),
            "z" | "2" => Ok(Experiment::ZSector),
            "full" => Ok(Experiment::Full),
            _ => Err(Error::InvalidParameter(format!("unknown experiment {s:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Experiment::XSector => "x",
            Experiment::ZSector => "z",
            Experiment::Full => "full",
        }
    }
}

/// Phenomenological noise: data errors at rate `p_data`, measurement flips at `p_synd`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    pub p_data: f64,
    pub p_synd: f64,
}

impl NoiseModel {
    pub fn uniform(p: f64) -> Self {
        Self { p_data: p, p_synd: p }
    }

    pub fn noiseless() -> Self {
        Self::uniform(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p_data", self.p_data), ("p_synd", self.p_synd)] {
            if !(0.0..=0.5).contains(&p) {
                return Err(Error::InvalidParameter(format!("{name} = {p} is outside [0, 0.5]")));
            }
        }
        Ok(())
    }
}

/// Switches that change what a trial does.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProtocolOptions {
    pub experiment: Experiment,
    /// Add X errors at `p_data` on every thickened qubit during stage 1.
    pub stage1_data_noise: bool,
    /// Add fresh X errors at `p_data` on the kept boundary before the final X decode.
    pub fresh_boundary_x: bool,
    /// Decode the whole bulk at once instead of sheet by sheet.
    pub whole_bulk: bool,
}

impl ProtocolOptions {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            stage1_data_noise: false,
            fresh_boundary_x: !matches!(experiment, Experiment::ZSector),
            whole_bulk: false,
        }
    }

    pub fn stage1_noisy(&self) -> bool {
        !matches!(self.experiment, Experiment::ZSector)
    }

    pub fn stage2_noisy(&self) -> bool {
        !matches!(self.experiment, Experiment::XSector)
    }
}

/// Decoder priors must be positive even when a noise source is switched off.
pub const PRIOR_FLOOR: f64 = 1e-3;

pub fn prior(p: f64) -> f64 {
    p.clamp(PRIOR_FLOOR, 0.49)
}
