//! Sample moments and the moment-variance Monte Carlo for the Steinberg
//! sector of random projective graphs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::actions::{random_generators_trial, VertexSpace};
use crate::error::{Error, Result};
use crate::graph::build_schreier;
use crate::modp::Prime;
use crate::scalar::Real;
use crate::spectra::graph_spectrum;
use crate::stats::words::trivial_word_count_f64;

/// Cap on `m · ln(2d)`; keeps `(2d)^{2m}` far inside the `f64` range.
pub const LOG_GUARD: f64 = 300.0;

/// `(1/n) Σ λ_i^m`.
pub fn moment_of_sample<T: Real>(values: &[T], m: u32) -> Result<T> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(values.iter().map(|x| x.powi(m as i32)).sum::<T>() / T::of(values.len()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentVariance {
    /// `(1/trials) Σ (moment − N(d,m))²`.
    pub variance: f64,
    /// `2 (2d)^{2m} |G| / (p² d(π)²)` with `|G| = p³ − p`, `d(π) = p`.
    pub bound: f64,
    pub mean: f64,
    pub expected: f64,
    pub moments: Vec<f64>,
}

fn check_guard(d: u32, m: u32) -> Result<()> {
    let scale = m as f64 * (2.0 * d as f64).ln();
    if scale > LOG_GUARD {
        return Err(Error::GuardExceeded(format!(
            "m ln(2d) = {scale:.1} > {LOG_GUARD}"
        )));
    }
    Ok(())
}

/// Steinberg variance bound for SL2(Z/pZ).
pub fn sl2_variance_bound(p: u64, d: u32, m: u32) -> Result<f64> {
    check_guard(d, m)?;
    let p = p as f64;
    let g = p * p * p - p;
    Ok(2.0 * (2.0 * d as f64).powi(2 * m as i32) * g / (p * p * p * p))
}

/// Comparator bound for SLn(Z/pZ), `n ≥ 2`: the class-size lower bound
/// `p^{n²−n}` of regular elements and `d(π) ≥ p^{n−1}` replace `p²` and
/// `d(π)`. Returned as a natural logarithm.
pub fn sln_log_variance_bound(n: u32, p: u64, d: u32, m: u32) -> Result<f64> {
    check_guard(d, m)?;
    if n < 2 {
        return Err(Error::OutOfRange(format!("rank {n} must be at least 2")));
    }
    let lp = (p as f64).ln();
    let n64 = n as f64;
    // |SLn| = p^{n(n-1)/2} Π_{i=2}^{n} (p^i − 1)
    let log_order = n64 * (n64 - 1.0) / 2.0 * lp
        + (2..=n)
            .map(|i| ((p as f64).powi(i as i32) - 1.0).ln())
            .sum::<f64>();
    Ok(
        2f64.ln() + 2.0 * m as f64 * (2.0 * d as f64).ln() + log_order
            - (n64 * n64 - n64) * lp
            - 2.0 * (n64 - 1.0) * lp,
    )
}

/// Draws `trials` random `2d`-element symmetric sets on the streams
/// `(seed, p, trial)` and compares the Steinberg-sector `m`-th moments
/// `(tr A^m − (2d)^m) / p` of the projective graphs with `N(d, m)`.
pub fn moment_variance_mc(
    p: Prime,
    d: u32,
    m: u32,
    trials: usize,
    seed: u64,
) -> Result<MomentVariance> {
    if trials < 10 {
        return Err(Error::OutOfRange(format!(
            "need at least 10 trials, got {trials}"
        )));
    }
    let bound = sl2_variance_bound(p.as_u64(), d, m)?;
    let k = 2 * d as usize;
    let moments: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let gens = random_generators_trial(seed, t, d as usize, p);
            let g = build_schreier(&VertexSpace::ProjectiveLine(p), &gens)?;
            let ev = graph_spectrum::<f64>(&g)?;
            let trace: f64 = ev.iter().map(|x| x.powi(m as i32)).sum();
            Ok((trace - (k as f64).powi(m as i32)) / p.as_u64() as f64)
        })
        .collect::<Result<_>>()?;
    let expected = trivial_word_count_f64(d, m);
    let mean = moments.iter().sum::<f64>() / trials as f64;
    let variance = moments.iter().map(|x| (x - expected).powi(2)).sum::<f64>() / trials as f64;
    Ok(MomentVariance {
        variance,
        bound,
        mean,
        expected,
        moments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_moments() {
        assert_eq!(moment_of_sample(&[-1.0, 1.0], 2).unwrap(), 1.0);
        assert_eq!(moment_of_sample(&[-1.0, 1.0], 1).unwrap(), 0.0);
        assert!(moment_of_sample::<f64>(&[], 2).is_err());
    }

    #[test]
    fn sln_bound_reduces_to_sl2() {
        for p in [101u64, 1009] {
            let a = sl2_variance_bound(p, 2, 4).unwrap();
            let b = sln_log_variance_bound(2, p, 2, 4).unwrap().exp();
            assert!((a / b - 1.0).abs() < 1e-9);
        }
        // rank 3 decays like p^{-2}
        let r = sln_log_variance_bound(3, 1009, 2, 4).unwrap()
            - sln_log_variance_bound(3, 101, 2, 4).unwrap();
        assert!((r / (1009f64 / 101.0).ln() + 2.0).abs() < 0.01);
    }

    #[test]
    fn guard_and_trial_count() {
        let p = Prime::new(13).unwrap();
        assert!(matches!(
            moment_variance_mc(p, 2, 400, 10, 0),
            Err(Error::GuardExceeded(_))
        ));
        assert!(moment_variance_mc(p, 2, 4, 5, 0).is_err());
    }

    #[test]
    fn small_monte_carlo_is_deterministic() {
        let p = Prime::new(31).unwrap();
        let a = moment_variance_mc(p, 2, 4, 10, 7).unwrap();
        let b = moment_variance_mc(p, 2, 4, 10, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.expected, 28.0);
        assert!(a.variance <= a.bound);
    }
}
