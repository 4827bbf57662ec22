//! Counter-based randomness: every trial owns a generator derived from
//! `(seed, stream, index)`, so results do not depend on scheduling.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

/// Recorded in report headers so runs can be reproduced elsewhere.
pub const GENERATOR: &str =
    "splitmix64(state = fmix(fmix(seed ^ fmix(stream + 0x9e3779b97f4a7c15)) ^ (index * 0x9e3779b97f4a7c15)))";

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// The SplitMix64 output function.
pub fn fmix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable 64-bit id for a named stream (FNV-1a).
pub fn stream_id(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

pub fn trial_rng(seed: u64, stream: u64, index: u64) -> SplitMix64 {
    let state = fmix(fmix(seed ^ fmix(stream.wrapping_add(GOLDEN))) ^ index.wrapping_mul(GOLDEN));
    SplitMix64::seed_from_u64(state)
}

pub fn rational_in<R: Rng>(rng: &mut R, num: RangeInclusive<i64>, den: RangeInclusive<i64>) -> BigRational {
    let p = rng.random_range(num);
    let q = rng.random_range(den);
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Default generator for randomized checks: numerator in `[-1000, 1000]`,
/// denominator in `[1, 20]`.
pub fn small_rational<R: Rng>(rng: &mut R) -> BigRational {
    rational_in(rng, -1000..=1000, 1..=20)
}
