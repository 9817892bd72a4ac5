//! Reproducible random streams.
//!
//! All randomness comes from ChaCha20 (the 20-round stream cipher used as a
//! counter-based generator). A stream is fully determined by
//! `(seed, p, trial)`:
//!
//! * key (32 bytes): `seed` as little-endian `u64` in bytes 0..8, `p` as
//!   little-endian `u64` in bytes 8..16, zeros in bytes 16..32;
//! * stream id (`u64`): `trial`;
//! * word position starts at 0.
//!
//! Output is consumed as little-endian `u64` words (`next_u64`). Uniform
//! integers in `[0, n)` use bitmask rejection: take the top
//! `ceil(log2(n))` bits of a word and reject values `>= n`. Uniform reals
//! in `[0, 1)` use the top 53 bits times `2^-53`.
//!
//! Any implementation of ChaCha20 following RFC 8439 block layout with a
//! 64-bit counter and 64-bit stream id reproduces these draws.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

#[derive(Clone, Debug)]
pub struct StreamRng {
    inner: ChaCha20Rng,
}

impl StreamRng {
    pub fn new(seed: u64, p: u64, trial: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        key[8..16].copy_from_slice(&p.to_le_bytes());
        let mut inner = ChaCha20Rng::from_seed(key);
        inner.set_stream(trial);
        StreamRng { inner }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform integer in `[0, n)`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        if n == 1 {
            return 0;
        }
        let bits = 64 - (n - 1).leading_zeros();
        loop {
            let x = self.next_u64() >> (64 - bits);
            if x < n {
                return x;
            }
        }
    }

    /// Uniform real in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal draw (Box–Muller, cosine branch).
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.unit();
        let u2 = self.unit();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}
