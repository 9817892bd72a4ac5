//! Interval discrepancy `sup_I |ν(I) − μ(I)|` between an empirical measure
//! `ν` and a continuous law `μ`, exact over closed intervals.
//!
//! With sorted atoms `λ_0 ≤ … ≤ λ_{n−1}` and `F_i = F(λ_i)`:
//!
//! * `ν − μ` peaks on some `[λ_i, λ_j]`, `i ≤ j`, giving
//!   `(j+1)/n − F_j + max_{i≤j}(F_i − i/n)`;
//! * `μ − ν` is approached on open gaps `(λ_i, λ_j)`, `i < j`, with sentinels
//!   `F_{−1} = 0`, `F_n = 1`, giving `F_j − F_i − (j−i−1)/n`.
//!
//! Ties are handled by the maximum: the choice of index within a block of
//! equal atoms that counts them correctly is always among the candidates.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::stats::kesten_mckay::KestenMcKay;

/// Discrepancy of `values` against an arbitrary continuous CDF.
pub fn discrepancy_with_cdf<T: Real, F: Fn(T) -> T>(values: &[T], cdf: F) -> Result<T> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let n = T::of(v.len());
    let f: Vec<T> = v.iter().map(|&x| cdf(x)).collect();

    let mut plus = T::zero();
    let mut best_left = T::neg_infinity();
    for (j, &fj) in f.iter().enumerate() {
        best_left = best_left.max(fj - T::of(j) / n);
        plus = plus.max(T::of(j + 1) / n - fj + best_left);
    }

    // i ranges over -1..j, written as i + 1 to stay unsigned
    let mut minus = T::zero();
    let mut best_gap = T::zero(); // i = -1: i/n - F_i = -1/n - 0, shifted below
    let inv_n = T::one() / n;
    best_gap = best_gap - inv_n;
    for j in 0..=v.len() {
        let fj = if j == v.len() { T::one() } else { f[j] };
        // F_j - (j-1)/n + max_{i<j}(i/n - F_i)
        minus = minus.max(fj - (T::of(j) - T::one()) / n + best_gap);
        if j < v.len() {
            best_gap = best_gap.max(T::of(j) / n - f[j]);
        }
    }
    Ok(plus.max(minus).max(T::zero()).min(T::one()))
}

/// Discrepancy against the Kesten–McKay law of degree `k`.
pub fn discrepancy<T: Real>(values: &[T], k: usize) -> Result<T> {
    let km = KestenMcKay::<T>::new(k)?;
    discrepancy_with_cdf(values, |x| km.cdf(x))
}
