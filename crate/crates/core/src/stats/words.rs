//! Counting trivial words: reduced-to-identity words of length `m` in the
//! free group on `d` generators, equivalently closed walks of length `m` at
//! the root of the `2d`-regular tree.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// `N(d, m)` by dynamic programming over the distance from the root.
pub fn trivial_word_count(d: u32, m: u32) -> BigUint {
    let k = 2 * d as u64;
    let m = m as usize;
    let mut at = vec![BigUint::zero(); m + 2];
    at[0] = BigUint::from(1u32);
    for step in 0..m {
        let mut next = vec![BigUint::zero(); m + 2];
        // distances above `step` are unreachable
        for r in 0..=step.min(m) {
            if at[r].is_zero() {
                continue;
            }
            let out = if r == 0 { k } else { k - 1 };
            next[r + 1] += &at[r] * out;
            if r > 0 {
                next[r - 1] += &at[r];
            }
        }
        at = next;
    }
    at.swap_remove(0)
}

/// `N(d, m)` as a float (exact below 2^53).
pub fn trivial_word_count_f64(d: u32, m: u32) -> f64 {
    trivial_word_count(d, m).to_f64().unwrap_or(f64::INFINITY)
}
