//! The Kesten–McKay law: spectral measure of the infinite `k`-regular tree,
//! with density `k √(4(k−1) − x²) / (2π (k² − x²))` on `|x| ≤ 2√(k−1)`.
//!
//! Integrals use the substitution `x = R sin θ`, `R = 2√(k−1)`, which turns
//! the density into the smooth weight `k R² cos² θ / (2π (k² − R² sin² θ))`.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::stats::quadrature::integrate;

const ABS_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KestenMcKay<T> {
    k: usize,
    radius: T,
}

impl<T: Real> KestenMcKay<T> {
    pub fn new(k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::OutOfRange(format!("degree {k} must be at least 3")));
        }
        Ok(KestenMcKay {
            k,
            radius: T::c(2.0) * T::of(k - 1).sqrt(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `2√(k−1)`, the Ramanujan bound.
    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn support(&self) -> (T, T) {
        (-self.radius, self.radius)
    }

    pub fn density(&self, x: T) -> T {
        let r2 = self.radius * self.radius;
        if x.abs() >= self.radius {
            return T::zero();
        }
        let k = T::of(self.k);
        k * (r2 - x * x).sqrt() / (T::c(2.0) * T::PI() * (k * k - x * x))
    }

    fn weight(&self, theta: T) -> T {
        let k = T::of(self.k);
        let r2 = self.radius * self.radius;
        let (s, c) = theta.sin_cos();
        k * r2 * c * c / (T::c(2.0) * T::PI() * (k * k - r2 * s * s))
    }

    pub fn cdf(&self, x: T) -> T {
        if x <= -self.radius {
            return T::zero();
        }
        if x >= self.radius {
            return T::one();
        }
        let theta = (x / self.radius).asin();
        let v = integrate(|t| self.weight(t), -T::FRAC_PI_2(), theta, T::c(ABS_TOL));
        v.max(T::zero()).min(T::one())
    }

    /// `F⁻¹(u)` by bisection on the CDF.
    pub fn quantile(&self, u: T) -> T {
        if u <= T::zero() {
            return -self.radius;
        }
        if u >= T::one() {
            return self.radius;
        }
        let (mut lo, mut hi) = (-T::FRAC_PI_2(), T::FRAC_PI_2());
        for _ in 0..200 {
            let mid = (lo + hi) / T::c(2.0);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(self.radius * mid.sin()) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.radius * ((lo + hi) / T::c(2.0)).sin()
    }

    /// `∫ x^m f(x) dx`, to relative accuracy near machine precision.
    pub fn moment(&self, m: u32) -> T {
        if m % 2 == 1 {
            return T::zero();
        }
        let r = self.radius;
        let scale = r.powi(m as i32).max(T::one());
        integrate(
            |t: T| (r * t.sin()).powi(m as i32) * self.weight(t),
            -T::FRAC_PI_2(),
            T::FRAC_PI_2(),
            T::c(ABS_TOL) * T::c(1e-2) * scale,
        )
    }
}

pub fn km_density(k: usize, x: f64) -> f64 {
    KestenMcKay::new(k).map_or(f64::NAN, |km| km.density(x))
}

pub fn km_cdf(k: usize, x: f64) -> f64 {
    KestenMcKay::new(k).map_or(f64::NAN, |km| km.cdf(x))
}

pub fn km_moment(k: usize, m: u32) -> f64 {
    KestenMcKay::new(k).map_or(f64::NAN, |km: KestenMcKay<f64>| km.moment(m))
}
