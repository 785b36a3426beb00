//! Reproducible random streams.
//!
//! Every stream is a ChaCha8 generator (a counter-based stream cipher, so
//! the output is fixed by the 256-bit key alone). Keys come from a 64-bit
//! seed expanded by `rand_core`'s `seed_from_u64`. Sub-streams for replicas
//! or sweep points use `hash64(master, index)`, a SplitMix64 finalizer over
//! the pair, so their seeds do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for sub-stream `index` of `master`.
pub fn hash64(master: u64, index: u64) -> u64 {
    mix64(mix64(master.wrapping_add(GOLDEN)) ^ index.wrapping_add(1).wrapping_mul(GOLDEN))
}

pub fn stream(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}
