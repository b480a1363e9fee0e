use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gf2::BinaryVector;

/// Independent randomness streams within one trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Stage1 = 1,
    Intrinsic = 2,
    Stage2 = 3,
    Final = 4,
    Baseline = 5,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed for `(master, point, trial, stream)`: each coordinate is folded in with one
/// SplitMix64 round, so results do not depend on how trials are scheduled.
pub fn derive_seed(master: u64, point: u64, trial: u64, stream: Stream) -> u64 {
    [point, trial, stream as u64]
        .into_iter()
        .fold(splitmix64(master), |acc, x| splitmix64(acc ^ splitmix64(x)))
}

pub fn trial_rng(master: u64, point: u64, trial: u64, stream: Stream) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, point, trial, stream))
}

/// Each bit set independently with probability `p`.
pub fn bernoulli_vector<R: Rng + ?Sized>(rng: &mut R, len: usize, p: f64) -> BinaryVector {
    let mut v = BinaryVector::zeros(len);
    if p <= 0.0 {
        return v;
    }
    for i in 0..len {
        if rng.gen::<f64>() < p {
            v.set(i, true);
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_separate_coordinates() {
        let a = derive_seed(7, 0, 0, Stream::Stage1);
        assert_eq!(a, derive_seed(7, 0, 0, Stream::Stage1));
        assert_ne!(a, derive_seed(7, 0, 1, Stream::Stage1));
        assert_ne!(a, derive_seed(7, 1, 0, Stream::Stage1));
        assert_ne!(a, derive_seed(7, 0, 0, Stream::Stage2));
        assert_ne!(a, derive_seed(8, 0, 0, Stream::Stage1));
    }

    #[test]
    fn bernoulli_extremes() {
        let mut rng = trial_rng(1, 2, 3, Stream::Final);
        assert!(bernoulli_vector(&mut rng, 100, 0.0).is_zero());
        assert_eq!(bernoulli_vector(&mut rng, 100, 1.0).weight(), 100);
    }
}
