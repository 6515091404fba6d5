//! Deterministic, splittable random number streams.
//!
//! All Monte Carlo work in this crate derives its randomness from a single
//! `u64` seed through two mechanisms: [`substream`] opens one of 2^64
//! independent streams of a counter-based generator, and [`derive_seed`]
//! mixes an index into a seed to produce an unrelated child seed for nested
//! levels (replication -> draw). Both are pure functions, so results are
//! identical no matter how work is scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Mixes `index` into `seed`, producing a statistically unrelated child seed.
///
/// Uses the splitmix64 finalizer over a golden-ratio index step; distinct
/// indices under the same seed give distinct, well-spread outputs.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Opens stream `index` of the counter-based generator seeded by `seed`.
///
/// Streams with different indices are independent by construction and may be
/// consumed in any order or in parallel.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Fills `buf` with independent standard normal draws.
pub fn fill_standard_normal<R: Rng + ?Sized>(rng: &mut R, buf: &mut [f64]) {
    for slot in buf.iter_mut() {
        *slot = rng.sample(StandardNormal);
    }
}
