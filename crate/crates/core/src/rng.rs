//! Random streams.
//!
//! Every source of randomness is a ChaCha8 stream keyed by a 64-bit seed.
//! The key is expanded with `ChaCha8Rng::seed_from_u64` and individual
//! streams are selected with `set_stream`, which makes every draw a pure
//! function of `(seed, stream, position)` on every platform:
//!
//! | stream          | consumer                                   |
//! |-----------------|--------------------------------------------|
//! | `0`             | the learner's action sampling              |
//! | `t` (`t >= 1`)  | stochastic environment draws for round `t` |
//! | `u64::MAX`      | slow-explorer exploration set              |
//!
//! Uniform reals use the top 53 bits of one `next_u64` draw.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const LEARNER_STREAM: u64 = 0;
pub const EXPLORATION_STREAM: u64 = u64::MAX;

/// Seed of replication `r` at horizon `n`.
///
/// `master ^ (n << 32) ^ r` (with `n` rotated into the high word), which is
/// injective in `(n, r)` for `n, r < 2^32` and a fixed master seed.
pub fn derive_run_seed(master: u64, horizon: u64, replication: u64) -> u64 {
    master ^ horizon.rotate_left(32) ^ replication
}

/// 32-byte ChaCha key derived from a 64-bit seed.
pub fn key_from_seed(seed: u64) -> [u8; 32] {
    ChaCha8Rng::seed_from_u64(seed).get_seed()
}

/// Opens `stream` of the generator keyed by `key`, positioned at word 0.
pub fn stream(key: [u8; 32], stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(stream);
    rng
}

/// Uniform draw in `[0, 1)`.
#[inline]
pub fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform integer in `[0, bound)` by rejection (no modulo bias).
pub fn below(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    assert!(bound > 0);
    let zone = u64::MAX - (u64::MAX - bound + 1) % bound;
    loop {
        let v = rng.next_u64();
        if v <= zone {
            return v % bound;
        }
    }
}
