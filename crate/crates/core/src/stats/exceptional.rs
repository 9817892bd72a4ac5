//! Exceptional eigenvalues beyond a scaled Ramanujan bound.

use serde::{Deserialize, Serialize};

use crate::desymmetrize::SpectrumSample;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalCount {
    pub count: usize,
    /// `α · 2√(k−1)`.
    pub threshold: f64,
    /// `p^{1 − log_k(α)/2}`.
    pub bound: f64,
}

/// Counts `|λ| > α · 2√(k−1)` in a sample whose trivial eigenvalues are
/// already removed. The bound uses `p = sample.p`, or the sample size when
/// `p` is unset.
pub fn count_exceptional<T: Real>(
    sample: &SpectrumSample<T>,
    k: usize,
    alpha: f64,
) -> Result<ExceptionalCount> {
    if !(alpha > 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    if k < 2 {
        return Err(Error::OutOfRange(format!("degree {k} must be at least 2")));
    }
    let threshold = alpha * 2.0 * ((k - 1) as f64).sqrt();
    let t = T::c(threshold);
    let count = sample.eigenvalues.iter().filter(|x| x.abs() > t).count();
    let p = sample.p.unwrap_or(sample.len() as u64) as f64;
    Ok(ExceptionalCount {
        count,
        threshold,
        bound: exceptional_bound(p, k, alpha),
    })
}

pub fn exceptional_bound(p: f64, k: usize, alpha: f64) -> f64 {
    p.powf(1.0 - alpha.ln() / (k as f64).ln() / 2.0)
}

/// Least-squares slope of `ln N` against `ln p` over points with `N > 0`;
/// `None` with fewer than two such points or a single distinct `p`.
pub fn fit_decay_exponent(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(p, n)| *p > 0.0 && *n > 0.0)
        .map(|(p, n)| (p.ln(), n.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|q| q.0).sum::<f64>() / m;
    let my = pts.iter().map(|q| q.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|q| (q.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|q| (q.0 - mx) * (q.1 - my)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::desymmetrize::Sector;

    fn sample(v: Vec<f64>, p: Option<u64>) -> SpectrumSample<f64> {
        SpectrumSample::new(v, Sector::Steinberg, 4, p, None).unwrap()
    }

    #[test]
    fn counting_examples() {
        let c = count_exceptional(&sample(vec![3.6, -3.5, 1.0], None), 4, 1.01).unwrap();
        assert_eq!(c.count, 2);
        assert!((c.threshold - 3.498_742_6).abs() < 1e-6);
        let inside = count_exceptional(&sample(vec![3.4, -3.4, 0.0], Some(7)), 4, 1.0001).unwrap();
        assert_eq!(inside.count, 0);
        assert!(matches!(
            count_exceptional(&sample(vec![0.0], None), 4, 1.0),
            Err(Error::AlphaOutOfRange(_))
        ));
    }

    #[test]
    fn bound_formula() {
        // alpha = k gives exponent 1/2
        assert!((exceptional_bound(10_000.0, 4, 4.0) - 100.0).abs() < 1e-9);
        assert!(
            (exceptional_bound(101.0, 4, 1.05) - 101f64.powf(1.0 - 1.05f64.ln() / 4f64.ln() / 2.0))
                .abs()
                < 1e-12
        );
    }

    #[test]
    fn decay_fit_recovers_power() {
        let pts: Vec<(f64, f64)> = [100.0, 1000.0, 10_000.0]
            .iter()
            .map(|&p: &f64| (p, 3.0 * p.powf(0.7)))
            .collect();
        assert!((fit_decay_exponent(&pts).unwrap() - 0.7).abs() < 1e-12);
        assert_eq!(fit_decay_exponent(&[(5.0, 1.0), (7.0, 0.0)]), None);
    }
}
