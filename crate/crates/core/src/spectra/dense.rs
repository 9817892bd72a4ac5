//! Dense Hermitian eigenvalues: Householder reduction to real tridiagonal
//! form followed by implicit QL with Wilkinson-style shifts.

use num_complex::Complex;
use num_traits::{Float, One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest dimension accepted by [`dense_eigenvalues`].
pub const DEFAULT_DENSE_LIMIT: usize = 25_000;

const HERMITIAN_TOL: f64 = 1e-10;
const QL_MAX_SWEEPS: usize = 60;

/// Matrix entry type: a real scalar or a complex number over one.
pub trait Entry: Copy + Send + Sync + std::fmt::Debug + 'static {
    type R: Real;
    fn zero() -> Self;
    fn from_real(x: Self::R) -> Self;
    fn re(self) -> Self::R;
    fn conj(self) -> Self;
    fn norm_sqr(self) -> Self::R;
    fn scale(self, s: Self::R) -> Self;
    fn add(self, o: Self) -> Self;
    fn sub(self, o: Self) -> Self;
    fn mul(self, o: Self) -> Self;
}

macro_rules! real_entry {
    ($t:ty) => {
        impl Entry for $t {
            type R = $t;
            #[inline]
            fn zero() -> Self {
                0.0
            }
            #[inline]
            fn from_real(x: $t) -> Self {
                x
            }
            #[inline]
            fn re(self) -> $t {
                self
            }
            #[inline]
            fn conj(self) -> Self {
                self
            }
            #[inline]
            fn norm_sqr(self) -> $t {
                self * self
            }
            #[inline]
            fn scale(self, s: $t) -> Self {
                self * s
            }
            #[inline]
            fn add(self, o: Self) -> Self {
                self + o
            }
            #[inline]
            fn sub(self, o: Self) -> Self {
                self - o
            }
            #[inline]
            fn mul(self, o: Self) -> Self {
                self * o
            }
        }

        impl Entry for Complex<$t> {
            type R = $t;
            #[inline]
            fn zero() -> Self {
                Complex::new(0.0, 0.0)
            }
            #[inline]
            fn from_real(x: $t) -> Self {
                Complex::new(x, 0.0)
            }
            #[inline]
            fn re(self) -> $t {
                self.re
            }
            #[inline]
            fn conj(self) -> Self {
                Complex::conj(&self)
            }
            #[inline]
            fn norm_sqr(self) -> $t {
                Complex::norm_sqr(&self)
            }
            #[inline]
            fn scale(self, s: $t) -> Self {
                self * s
            }
            #[inline]
            fn add(self, o: Self) -> Self {
                self + o
            }
            #[inline]
            fn sub(self, o: Self) -> Self {
                self - o
            }
            #[inline]
            fn mul(self, o: Self) -> Self {
                self * o
            }
        }
    };
}

real_entry!(f32);
real_entry!(f64);

/// Square matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<E> {
    n: usize,
    data: Vec<E>,
}

impl<E: Entry> DenseMatrix<E> {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![E::zero(); n * n],
        }
    }

    pub fn from_row_major(n: usize, data: Vec<E>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                dim: n,
                len: data.len(),
            });
        }
        Ok(DenseMatrix { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> E {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: E) {
        let x = &mut self.data[i * self.n + j];
        *x = x.add(v);
    }

    pub fn as_slice(&self) -> &[E] {
        &self.data
    }

    /// `max |a_ij - conj(a_ji)|` relative to `max(1, max |a_ij|)`.
    pub fn hermitian_residual(&self) -> f64 {
        let n = self.n;
        let mut worst = E::R::zero();
        let mut size = E::R::one();
        for i in 0..n {
            for j in i..n {
                let a = self.get(i, j);
                let d = a.sub(self.get(j, i).conj()).norm_sqr();
                worst = worst.max(d);
                size = size.max(a.norm_sqr());
            }
        }
        (worst.sqrt() / size.sqrt()).to_f64_lossy()
    }

    /// Trace of the real part.
    pub fn trace(&self) -> E::R {
        (0..self.n).map(|i| self.get(i, i).re()).sum()
    }
}

/// All eigenvalues of a real-symmetric or complex-Hermitian matrix, ascending.
pub fn dense_eigenvalues<E: Entry>(m: &DenseMatrix<E>) -> Result<Vec<E::R>> {
    dense_eigenvalues_limited(m, DEFAULT_DENSE_LIMIT)
}

pub fn dense_eigenvalues_limited<E: Entry>(m: &DenseMatrix<E>, limit: usize) -> Result<Vec<E::R>> {
    let n = m.dim();
    if n > limit {
        return Err(Error::SizeOverflow {
            n: n as u64,
            entries: (n * n) as u64,
            budget: (limit * limit) as u64,
        });
    }
    let residual = m.hermitian_residual();
    if !(residual < HERMITIAN_TOL) {
        return Err(Error::NotHermitian(residual));
    }
    let (mut d, mut e) = tridiagonalize(m.data.clone(), n);
    tridiagonal_ql(&mut d, &mut e)?;
    d.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(d)
}

/// Householder reduction of a Hermitian matrix (row-major, consumed) to a
/// real symmetric tridiagonal matrix: diagonal `d` and couplings `e`, where
/// `e[i]` joins `i` and `i + 1` and `e[n - 1] = 0`. The complex phases of the
/// subdiagonal are removed by a diagonal unitary, which leaves the spectrum
/// unchanged.
fn tridiagonalize<E: Entry>(mut a: Vec<E>, n: usize) -> (Vec<E::R>, Vec<E::R>) {
    let zero = E::R::zero();
    let mut d = vec![zero; n];
    let mut e = vec![zero; n];
    if n == 0 {
        return (d, e);
    }
    let mut v = vec![E::zero(); n];
    let mut w = vec![E::zero(); n];
    for k in 0..n.saturating_sub(2) {
        d[k] = a[k * n + k].re();
        let lo = k + 1;
        let mut xnorm2 = zero;
        for i in lo..n {
            xnorm2 += a[i * n + k].norm_sqr();
        }
        if xnorm2 == zero {
            e[k] = zero;
            continue;
        }
        let r = xnorm2.sqrt();
        let x0 = a[lo * n + k];
        let x0abs = x0.norm_sqr().sqrt();
        let phase = if x0abs > zero {
            x0.scale(E::R::one() / x0abs)
        } else {
            E::from_real(E::R::one())
        };
        // v = x + phase * r * e1 sends x to -phase * r * e1
        for i in lo..n {
            v[i] = a[i * n + k];
        }
        v[lo] = x0.add(phase.scale(r));
        let tau = E::R::one() / (r * (r + x0abs));
        e[k] = r;

        // w = tau * A' v over the trailing block
        for i in lo..n {
            let row = &a[i * n + lo..i * n + n];
            let mut acc = E::zero();
            for (aij, vj) in row.iter().zip(&v[lo..n]) {
                acc = acc.add(aij.mul(*vj));
            }
            w[i] = acc.scale(tau);
        }
        let mut vw = zero;
        for i in lo..n {
            vw += v[i].conj().mul(w[i]).re();
        }
        let half_k = tau * vw / E::R::c(2.0);
        for i in lo..n {
            w[i] = w[i].sub(v[i].scale(half_k));
        }
        // A' -= v q* + q v*
        for i in lo..n {
            let vi = v[i];
            let qi = w[i];
            let row = &mut a[i * n + lo..i * n + n];
            for (j, aij) in row.iter_mut().enumerate() {
                let j = j + lo;
                *aij = aij.sub(vi.mul(w[j].conj()).add(qi.mul(v[j].conj())));
            }
        }
    }
    if n >= 2 {
        d[n - 2] = a[(n - 2) * n + n - 2].re();
        e[n - 2] = a[(n - 1) * n + n - 2].norm_sqr().sqrt();
    }
    d[n - 1] = a[(n - 1) * n + n - 1].re();
    (d, e)
}

/// Implicit QL on a symmetric tridiagonal matrix; eigenvalues replace `d`.
pub fn tridiagonal_ql<T: Real>(d: &mut [T], e: &mut [T]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = T::zero();
    let eps = T::epsilon();
    let two = T::c(2.0);
    // absolute deflation threshold; a relative one never fires between zero
    // diagonal entries
    let anorm = d
        .iter()
        .zip(e.iter())
        .map(|(a, b)| a.abs() + b.abs())
        .fold(T::zero(), |m, x| m.max(x));
    let tiny = eps * anorm;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd || e[m].abs() <= tiny {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_SWEEPS {
                return Err(Error::NoConvergence(iter));
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + r.abs().copysign(g));
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

/// Cyclic Jacobi eigen-decomposition of a small real symmetric matrix
/// (row-major). Returns ascending eigenvalues and the matching eigenvectors
/// as columns of a row-major `n × n` matrix.
pub fn jacobi_eigen<T: Real>(a: &[T], n: usize) -> (Vec<T>, Vec<T>) {
    let mut a = a.to_vec();
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }
    let eps = T::epsilon();
    for _sweep in 0..100 {
        let mut off = T::zero();
        let mut total = T::zero();
        for i in 0..n {
            for j in 0..n {
                let x = a[i * n + j] * a[i * n + j];
                total += x;
                if i != j {
                    off += x;
                }
            }
        }
        if off <= eps * eps * total || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (T::c(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let t = if theta == T::zero() { T::one() } else { t };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].partial_cmp(&a[j * n + j]).expect("finite"));
    let vals = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vecs = vec![T::zero(); n * n];
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vecs[k * n + new] = v[k * n + old];
        }
    }
    (vals, vecs)
}
