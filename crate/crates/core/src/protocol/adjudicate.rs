use crate::decoders::SyndromeDecoder;
use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BinaryVector};

/// Whether a residual in `ker H` flips a logical: true iff `L r != 0`.
///
/// `h` holds the checks that detect this error type and `l` the logicals of the
/// opposite type.
pub fn adjudicate(h: &BinaryMatrix, l: &BinaryMatrix, residual: &BinaryVector) -> Result<bool> {
    if !h.mul_vec(residual).is_zero() {
        return Err(Error::ResidualNotInKernel);
    }
    Ok(!l.mul_vec(residual).is_zero())
}

/// A round of perfect syndrome decoding followed by adjudication.
///
/// Returns the failure verdict and the decoder's correction.
pub fn final_decode_and_adjudicate<D: SyndromeDecoder>(
    decoder: &mut D,
    l: &BinaryMatrix,
    residual: &BinaryVector,
) -> Result<(bool, BinaryVector)> {
    let s = decoder.h().mul_vec(residual);
    let c = decoder.decode(&s)?.correction;
    let mut r = residual.clone();
    r ^= &c;
    let fail = adjudicate(decoder.h(), l, &r)?;
    Ok((fail, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logical_and_stabilizer_verdicts() {
        let h = BinaryMatrix::from_bitstrings(&["110", "011"]).unwrap();
        let l = BinaryMatrix::from_bitstrings(&["100"]).unwrap();
        assert!(adjudicate(&h, &l, &BinaryVector::from_bitstring("111").unwrap()).unwrap());
        assert!(!adjudicate(&h, &l, &BinaryVector::zeros(3)).unwrap());
        assert!(matches!(
            adjudicate(&h, &l, &BinaryVector::from_bitstring("100").unwrap()),
            Err(Error::ResidualNotInKernel)
        ));
    }
}
