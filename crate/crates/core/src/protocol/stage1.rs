use rand::Rng;

use crate::codes::thicken::ThickenedCode;
use crate::decoders::MetacheckDecoder;
use crate::error::Result;
use crate::gf2::BinaryVector;
use crate::protocol::rng::bernoulli_vector;

#[derive(Clone, Debug)]
pub struct Stage1Outcome {
    /// X errors on the thickened qubits.
    pub data_error: BinaryVector,
    /// `s_e`, flips of the Z-check outcomes.
    pub syndrome_error: BinaryVector,
    pub syndrome_repair: BinaryVector,
    pub correction: BinaryVector,
    /// `e + ê` on the thickened code.
    pub residual: BinaryVector,
    pub fallback_used: bool,
}

/// Measures every Z-check of the thickened code once on `|+⟩^ñ`.
///
/// The true syndrome is taken to be zero (the outcome is random but known), so the
/// observed syndrome is `H̃_Z e + s_e`.
pub fn stage1_simulate<R: Rng + ?Sized>(
    thick: &ThickenedCode,
    decoder: &mut MetacheckDecoder,
    p_data: f64,
    p_synd: f64,
    rng: &mut R,
) -> Result<Stage1Outcome> {
    let hz = thick.code.hz();
    let data_error = bernoulli_vector(rng, hz.cols(), p_data);
    let syndrome_error = bernoulli_vector(rng, hz.rows(), p_synd);
    stage1_decode(thick, decoder, data_error, syndrome_error)
}

/// Stage 1 for a given error pair.
pub fn stage1_decode(
    thick: &ThickenedCode,
    decoder: &mut MetacheckDecoder,
    data_error: BinaryVector,
    syndrome_error: BinaryVector,
) -> Result<Stage1Outcome> {
    let mut observed = thick.code.hz().mul_vec(&data_error);
    observed ^= &syndrome_error;
    let r = decoder.decode(&observed)?;
    let mut residual = data_error.clone();
    residual ^= &r.correction;
    Ok(Stage1Outcome {
        data_error,
        syndrome_error,
        syndrome_repair: r.syndrome_repair,
        correction: r.correction,
        residual,
        fallback_used: r.fallback_used,
    })
}
