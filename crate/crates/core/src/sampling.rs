//! Seeded random streams and the area-uniform samplers used by every model.
//!
//! Stream derivation is bit-exact and portable:
//!
//! 1. `stream_seed(master, run) = mix(master + (run + 1) * 0x9E3779B97F4A7C15)`,
//!    all arithmetic wrapping mod 2^64, where `mix` is the SplitMix64
//!    finalizer (`z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
//!    z *= 0x94D049BB133111EB; z ^= z >> 31`). This is the `run`-th output
//!    of a SplitMix64 generator seeded with `master`.
//! 2. The 32-byte ChaCha8 key is four consecutive SplitMix64 outputs from
//!    a generator seeded with `stream_seed`, each written little-endian.
//! 3. A uniform draw on `[0, 1)` is `(next_u64 >> 11) * 2^-53`.

use core::f64::consts::TAU;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::SteerError;
use crate::geometry::Vec2;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output mixing function.
pub fn splitmix64_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the stream for `run` under `master`.
pub fn stream_seed(master: u64, run: u64) -> u64 {
    splitmix64_mix(master.wrapping_add(run.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// A reproducible random stream. Two streams built from the same seed
/// produce identical draws.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn from_seed(seed: u64) -> Self {
        let mut key = [0u8; 32];
        for (i, chunk) in key.chunks_exact_mut(8).enumerate() {
            let word = stream_seed(seed, i as u64);
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        Self {
            seed,
            inner: ChaCha8Rng::from_seed(key),
        }
    }

    /// Independent stream for run `run` of an experiment seeded by `master`.
    pub fn for_run(master: u64, run: u64) -> Self {
        Self::from_seed(stream_seed(master, run))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)`; consumes one 64-bit word.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// True with probability `p`; consumes one word.
    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }
}

/// Uniform point in the closed unit disc, by inverse CDF (`r = √u`,
/// `θ = 2πv`). Always consumes exactly two words: `u` first, then `v`.
pub fn sample_unit_disc(rng: &mut RngStream) -> Vec2 {
    let u = rng.uniform();
    let v = rng.uniform();
    Vec2::from_polar(libm::sqrt(u), TAU * v)
}

/// Area-uniform point in the sector `0 ≤ r ≤ radius`, `theta_lo ≤ θ ≤ theta_hi`.
/// Consumes two words, like [`sample_unit_disc`].
pub fn sample_sector(
    rng: &mut RngStream,
    radius: f64,
    theta_lo: f64,
    theta_hi: f64,
) -> Result<Vec2, SteerError> {
    if !radius.is_finite() || radius <= 0.0 {
        return Err(SteerError::InvalidRadius(radius));
    }
    let width = theta_hi - theta_lo;
    if !(width > 0.0 && width < TAU) {
        return Err(SteerError::InvalidAngleRange {
            lo: theta_lo,
            hi: theta_hi,
        });
    }
    Ok(sample_wedge(rng, radius, theta_lo, width))
}

/// Sector sampler that also accepts a zero-width wedge (a segment along
/// `start`). Callers guarantee `radius ≥ 0` and `0 ≤ width < 2π`.
pub(crate) fn sample_wedge(rng: &mut RngStream, radius: f64, start: f64, width: f64) -> Vec2 {
    let u = rng.uniform();
    let v = rng.uniform();
    Vec2::from_polar(radius * libm::sqrt(u), start + width * v)
}
