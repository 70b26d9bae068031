//! Seeded randomness. Every random draw in the crate goes through a
//! [`ChaCha8Rng`] built from an explicit `u64` seed, and sub-seeds are derived
//! by mixing so that serial and parallel schedules see the same streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::Complex;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Sub-seed for stream `index` of `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ splitmix64(index.wrapping_add(0x5851_f42d_4c95_7f2d)))
}

/// Standard complex Gaussian (independent N(0, 1/2) real and imaginary parts).
pub fn complex_normal<R: Rng>(rng: &mut R) -> Complex {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen::<f64>();
    let r = (-u1.ln()).sqrt();
    Complex::from_polar(r, 2.0 * std::f64::consts::PI * u2)
}

/// Uniform integer in `[-bound, bound]`, never zero when `nonzero` is set.
pub fn small_int<R: Rng>(rng: &mut R, bound: i64, nonzero: bool) -> i64 {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if !nonzero || v != 0 {
            return v;
        }
    }
}
