//! Unfolded nearest-neighbour spacings and their comparison with the
//! Wigner surmises and the Poisson law.

use serde::{Deserialize, Serialize};

use crate::desymmetrize::{Sector, SpectrumSample};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::stats::kesten_mckay::KestenMcKay;
use crate::stats::quadrature::integrate;

/// Minimum sample size accepted by [`unfold_spacings`].
pub const MIN_EIGENVALUES: usize = 50;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SpacingSeries<T> {
    /// Nonnegative spacings with mean 1.
    pub spacings: Vec<T>,
    pub sector: Sector,
}

impl<T: Real> SpacingSeries<T> {
    pub fn mean(&self) -> T {
        self.spacings.iter().copied().sum::<T>() / T::of(self.spacings.len())
    }
}

/// Relative gap below which two eigenvalues of a quaternionic sector count
/// as one Kramers pair.
const KRAMERS_TOL: f64 = 1e-6;

/// Principal-series sectors with odd `j` have central character `-1` and
/// are self-dual, hence quaternionic: every eigenvalue of the sector block
/// occurs exactly twice.
pub fn is_quaternionic(sector: Sector) -> bool {
    matches!(sector, Sector::PrincipalSeries(j) if j % 2 == 1)
}

/// One eigenvalue from each Kramers pair of a sorted quaternionic spectrum.
pub fn kramers_reduce<T: Real>(sorted: &[T], k: usize) -> Result<Vec<T>> {
    let tol = T::c(KRAMERS_TOL) * T::of(k.max(1));
    if sorted.len() % 2 == 1 {
        return Err(Error::Format(format!(
            "odd-length quaternionic spectrum ({})",
            sorted.len()
        )));
    }
    sorted
        .chunks(2)
        .map(|c| {
            if (c[1] - c[0]).abs() <= tol {
                Ok(c[0])
            } else {
                Err(Error::Format(format!(
                    "eigenvalues {} and {} do not pair",
                    c[0], c[1]
                )))
            }
        })
        .collect()
}

/// Spacings `n (F(λ_{i+1}) − F(λ_i))` of the eigenvalues inside the
/// Kesten–McKay support, rescaled to mean 1. Quaternionic sectors are
/// reduced to one eigenvalue per Kramers pair first.
pub fn unfold_spacings<T: Real>(sample: &SpectrumSample<T>, k: usize) -> Result<SpacingSeries<T>> {
    let reduced;
    let eigenvalues = if is_quaternionic(sample.sector) {
        reduced = kramers_reduce(&sample.eigenvalues, k)?;
        &reduced
    } else {
        &sample.eigenvalues
    };
    if eigenvalues.len() < MIN_EIGENVALUES {
        return Err(Error::TooFewEigenvalues {
            got: eigenvalues.len(),
            need: MIN_EIGENVALUES,
        });
    }
    let km = KestenMcKay::<T>::new(k)?;
    let r = km.radius();
    let mut inside: Vec<T> = eigenvalues
        .iter()
        .copied()
        .filter(|x| x.abs() <= r)
        .collect();
    inside.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    if inside.len() < 2 {
        return Err(Error::TooFewEigenvalues {
            got: inside.len(),
            need: 2,
        });
    }
    let n = T::of(inside.len());
    let u: Vec<T> = inside.iter().map(|&x| km.cdf(x)).collect();
    let mut spacings: Vec<T> = u.windows(2).map(|w| n * (w[1] - w[0])).collect();
    let mean = spacings.iter().copied().sum::<T>() / T::of(spacings.len());
    if !(mean > T::zero()) {
        return Err(Error::DegenerateSpacings);
    }
    spacings.iter_mut().for_each(|s| *s /= mean);
    Ok(SpacingSeries {
        spacings,
        sector: sample.sector,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpacingModel {
    Goe,
    Gse,
    Poisson,
}

impl SpacingModel {
    pub const ALL: [SpacingModel; 3] =
        [SpacingModel::Goe, SpacingModel::Gse, SpacingModel::Poisson];

    pub fn name(self) -> &'static str {
        match self {
            SpacingModel::Goe => "goe",
            SpacingModel::Gse => "gse",
            SpacingModel::Poisson => "poisson",
        }
    }

    /// Surmise density (Wigner for GOE and GSE).
    pub fn density<T: Real>(self, s: T) -> T {
        if s < T::zero() {
            return T::zero();
        }
        let pi = T::PI();
        match self {
            SpacingModel::Goe => pi / T::c(2.0) * s * (-pi * s * s / T::c(4.0)).exp(),
            SpacingModel::Gse => {
                let c = T::c(2f64.powi(18) / (3f64.powi(6) * std::f64::consts::PI.powi(3)));
                c * s.powi(4) * (-T::c(64.0) * s * s / (T::c(9.0) * pi)).exp()
            }
            SpacingModel::Poisson => (-s).exp(),
        }
    }

    pub fn cdf<T: Real>(self, s: T) -> T {
        if s <= T::zero() {
            return T::zero();
        }
        match self {
            SpacingModel::Goe => T::one() - (-T::PI() * s * s / T::c(4.0)).exp(),
            SpacingModel::Poisson => T::one() - (-s).exp(),
            SpacingModel::Gse => {
                // the density is below 1e-30 past s = 8
                let upper = s.min(T::c(8.0));
                let v = integrate(|t| self.density(t), T::zero(), upper, T::c(1e-14));
                v.min(T::one())
            }
        }
    }
}

/// Kolmogorov–Smirnov distance between the empirical spacing CDF and
/// `model`.
pub fn spacing_ks<T: Real>(series: &SpacingSeries<T>, model: SpacingModel) -> T {
    ks_distance(&series.spacings, |s| model.cdf(s))
}

/// `sup_x |F_emp(x) − F(x)|` for a continuous `F`.
pub fn ks_distance<T: Real, F: Fn(T) -> T>(values: &[T], cdf: F) -> T {
    if values.is_empty() {
        return T::zero();
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let n = T::of(v.len());
    let mut d = T::zero();
    for (i, &x) in v.iter().enumerate() {
        let f = cdf(x);
        d = d.max(T::of(i + 1) / n - f).max(f - T::of(i) / n);
    }
    d.min(T::one())
}
