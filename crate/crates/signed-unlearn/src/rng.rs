//! Seeded randomness with named streams.
//!
//! Every stochastic step in the crate (feature synthesis, encoder
//! projections, deletion sampling, Gaussian noise) draws from its own
//! ChaCha stream derived from a base seed plus a stream tag, so runs are
//! reproducible bit-for-bit and the streams stay independent of call
//! order.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Derives an independent RNG for `tag` from the base `seed`.
pub fn stream(seed: u64, tag: &str) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed ^ fnv1a(tag))
}

/// FNV-1a over the tag bytes; stable across platforms.
fn fnv1a(tag: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// One standard-normal draw via the Box-Muller transform.
pub fn standard_normal(rng: &mut ChaCha12Rng) -> f64 {
    // u1 in (0, 1] so the log stays finite.
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Fills a vector with `n` standard-normal draws.
pub fn normal_vec(rng: &mut ChaCha12Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| standard_normal(rng)).collect()
}
