//! Reproducible pseudorandom streams.
//!
//! All randomness comes from SplitMix64 (Steele, Lea & Flood, "Fast splittable
//! pseudorandom number generators", OOPSLA 2014), seeded directly with the
//! 64-bit user seed as its initial state. Uniform reals in `[0, 1)` take the
//! top 53 bits of one output: `(x >> 11) * 2^-53`.
//!
//! Sub-streams for trial `t` are seeded with [`derive_seed`]`(seed, t)`, which
//! is the `(t + 1)`-th output of the SplitMix64 stream started at `seed`. It is
//! computed in O(1), so per-trial streams do not depend on execution order.

use rand::RngCore;
use rand::SeedableRng;
pub use rand_xoshiro::SplitMix64;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// The SplitMix64 output finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for sub-stream `index` of the stream rooted at `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    mix64(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

pub fn stream(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

#[inline]
pub fn next_unit(rng: &mut SplitMix64) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
