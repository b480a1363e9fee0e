//! Syndrome decoders: min-sum BP, OSD, their combination, and exact oracles.

pub mod bp;
pub mod bposd;
pub mod exact;
pub mod osd;

pub use bp::{bp_decode, BpConfig, BpDecoder, BpOutput};
pub use bposd::{
    single_shot_decode, two_stage_metacheck_decode, BpOsdDecoder, DecoderConfig, MetacheckDecoder,
    SingleShotDecoder, SingleShotResult, TwoStageResult,
};
pub use exact::{exact_min_weight_decode, shadow_decode, ExactDecoder, ShadowDecoder};
pub use osd::{osd_postprocess, OsdConfig, SweepSet};

use crate::error::Result;
use crate::gf2::{BinaryMatrix, BinaryVector};

#[derive(Clone, Debug)]
pub struct DecodeResult {
    pub correction: BinaryVector,
    /// BP reproduced the syndrome before any postprocessing.
    pub converged: bool,
    pub soft_reliabilities: Vec<f64>,
    pub iterations: usize,
    pub osd_used: bool,
}

/// Finds `e` with `H e = s`.
pub trait SyndromeDecoder {
    fn h(&self) -> &BinaryMatrix;
    fn decode(&mut self, s: &BinaryVector) -> Result<DecodeResult>;
}
