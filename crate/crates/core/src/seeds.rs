//! Splittable seeds.
//!
//! Every random quantity is drawn from a `ChaCha8Rng` whose seed is derived
//! from the run's root seed and a path of stream tags:
//!
//! ```text
//! derive(root, [t_1, ..., t_k]) = fold(root, |s, t| mix(s ^ mix(t + GOLDEN)))
//! ```
//!
//! where `mix` is the SplitMix64 finalizer. Work items carry their own derived
//! seed, so results do not depend on how a thread pool schedules them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Stream tags used by the estimator.
pub mod stream {
    pub const CORE: u64 = 1;
    pub const DECAY: u64 = 2;
    pub const CROSS_CHECK: u64 = 3;
    pub const COSET_WITH: u64 = 4;
    pub const COSET_CONTROL: u64 = 5;
    pub const ICS: u64 = 6;
    pub const WORD: u64 = 7;
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive(root: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(root, |s, &t| mix(s ^ mix(t.wrapping_add(GOLDEN))))
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
