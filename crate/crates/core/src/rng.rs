//! Seeded randomness. Every randomized routine takes an [`RngSeed`] and derives
//! independent substreams from it by tag, so results do not depend on thread
//! scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(mix(self.0))
    }

    /// Child seed for a named purpose and index.
    pub fn derive(self, tag: u64, index: u64) -> RngSeed {
        RngSeed(mix(self.0 ^ mix(tag.wrapping_add(0x9E37_79B9_7F4A_7C15)) ^ mix(index).rotate_left(17)))
    }

    pub fn substream(self, tag: u64, index: u64) -> ChaCha8Rng {
        self.derive(tag, index).rng()
    }
}

impl From<u64> for RngSeed {
    fn from(v: u64) -> Self {
        RngSeed(v)
    }
}

// splitmix64 finalizer
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform draw from (0, 1].
pub fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Exp(rate) by inverse CDF.
pub fn exponential<R: Rng + ?Sized>(rng: &mut R, rate: f64) -> f64 {
    -open_unit(rng).ln() / rate
}

/// Standard normal via Box-Muller.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1 = open_unit(rng);
    let u2 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

// Substream tags.
pub(crate) const TAG_GENERATE: u64 = 1;
pub(crate) const TAG_SKETCH: u64 = 2;
pub(crate) const TAG_RAYLEIGH: u64 = 3;
pub(crate) const TAG_GAME_EXP: u64 = 4;
pub(crate) const TAG_GAME_FRESH: u64 = 5;
pub(crate) const TAG_STREAM_ROUND: u64 = 6;
pub(crate) const TAG_CLUSTER: u64 = 7;
pub(crate) const TAG_SPANNER_ROUND: u64 = 8;
pub(crate) const TAG_PARALLEL_ROUND: u64 = 9;
pub(crate) const TAG_PARALLEL_SAMPLE: u64 = 10;
pub(crate) const TAG_STRATEGY: u64 = 11;
