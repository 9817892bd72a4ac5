//! Thick-restart Lanczos for both ends of a symmetric spectrum.
//!
//! The basis is fully reorthogonalized (classical Gram–Schmidt, two passes)
//! and the projected matrix is assembled from the reorthogonalization
//! coefficients, so it stays exact even after restarts. On restart the Ritz
//! vectors nearest both ends are kept together with the residual direction.

use crate::error::{Error, Result};
use crate::graph::SchreierGraph;
use crate::rng::StreamRng;
use crate::scalar::Real;
use crate::spectra::dense::jacobi_eigen;

/// A real symmetric linear map given by its action.
pub trait SymmetricOperator<T: Real>: Sync {
    fn dim(&self) -> usize;
    /// `y = A x`.
    fn apply(&self, x: &[T], y: &mut [T]);
}

impl<T: Real> SymmetricOperator<T> for SchreierGraph {
    fn dim(&self) -> usize {
        self.num_vertices()
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        self.matvec(x, y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenMode {
    Full,
    ExtremePair,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EigenRequest {
    pub mode: EigenMode,
    /// Residual bound relative to the operator scale (the degree for graphs).
    pub tolerance: f64,
    /// Cap on operator applications.
    pub max_iterations: usize,
    pub seed: u64,
    /// Krylov basis size between restarts.
    pub krylov_dim: usize,
}

impl Default for EigenRequest {
    fn default() -> Self {
        EigenRequest {
            mode: EigenMode::ExtremePair,
            tolerance: 1e-8,
            max_iterations: 200_000,
            seed: 0,
            krylov_dim: 80,
        }
    }
}

impl EigenRequest {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::OutOfRange(format!(
                "tolerance {} must be positive",
                self.tolerance
            )));
        }
        if self.krylov_dim < 3 {
            return Err(Error::OutOfRange("krylov_dim must be at least 3".into()));
        }
        Ok(())
    }
}

/// Extreme eigenvalues on the complement of the deflated directions.
#[derive(Clone, Debug)]
pub struct LanczosOutcome<T> {
    pub largest: T,
    pub smallest: T,
    /// `‖A y − θ y‖` recomputed from the returned Ritz vectors.
    pub largest_residual: T,
    pub smallest_residual: T,
    pub matvecs: usize,
    pub restarts: usize,
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    // four accumulators keep the reduction vectorizable
    let mut acc = [T::zero(); 4];
    let mut ca = a.chunks_exact(4);
    let mut cb = b.chunks_exact(4);
    for (x, y) in (&mut ca).zip(&mut cb) {
        for i in 0..4 {
            acc[i] += x[i] * y[i];
        }
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (x, y) in ca.remainder().iter().zip(cb.remainder()) {
        s += *x * *y;
    }
    s
}

fn axpy<T: Real>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * *xi;
    }
}

fn norm<T: Real>(x: &[T]) -> T {
    dot(x, x).sqrt()
}

fn project_out<T: Real>(basis: &[Vec<T>], w: &mut [T]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, w);
            axpy(-c, b, w);
        }
    }
}

/// Random unit vector orthogonal to `deflate` and `basis`; `None` when the
/// complement is numerically empty.
fn fresh_direction<T: Real>(
    rng: &mut StreamRng,
    n: usize,
    deflate: &[Vec<T>],
    basis: &[Vec<T>],
) -> Option<Vec<T>> {
    for _ in 0..5 {
        let mut v: Vec<T> = (0..n).map(|_| T::c(rng.normal())).collect();
        project_out(deflate, &mut v);
        project_out(basis, &mut v);
        let nv = norm(&v);
        if nv > T::c(1e-6) * T::of(n).sqrt() {
            v.iter_mut().for_each(|x| *x /= nv);
            return Some(v);
        }
    }
    None
}

/// Largest and smallest eigenvalues of `op` restricted to the orthogonal
/// complement of `deflate` (orthonormal vectors). `scale` bounds the operator
/// norm and sets the residual threshold `tolerance * scale`.
pub fn lanczos_extremes<T: Real, A: SymmetricOperator<T>>(
    op: &A,
    deflate: &[Vec<T>],
    scale: T,
    req: &EigenRequest,
) -> Result<LanczosOutcome<T>> {
    req.validate()?;
    let n = op.dim();
    if deflate.iter().any(|d| d.len() != n) {
        return Err(Error::DimensionMismatch {
            dim: n,
            len: deflate[0].len(),
        });
    }
    let free = n.saturating_sub(deflate.len());
    if free == 0 {
        return Err(Error::OutOfRange("nothing left after deflation".into()));
    }
    let m = req.krylov_dim.min(free);
    let keep_each = ((m - 1) / 4).clamp(1, 12);
    let tol = T::c(req.tolerance) * scale;
    let breakdown = T::epsilon() * T::c(1e3) * scale;

    let mut rng = StreamRng::new(req.seed, n as u64, 0);
    let mut basis: Vec<Vec<T>> = Vec::with_capacity(m + 1);
    basis.push(
        fresh_direction(&mut rng, n, deflate, &[])
            .ok_or_else(|| Error::OutOfRange("deflation spans the space".into()))?,
    );
    let mut h = vec![T::zero(); m * m];
    let mut locked = 0usize;
    let mut matvecs = 0usize;
    let mut restarts = 0usize;
    let mut w = vec![T::zero(); n];
    let mut coeff = vec![T::zero(); m];

    loop {
        let mut beta = T::zero();
        let mut residual_dir: Option<Vec<T>> = None;
        let mut size = m;
        let mut j = locked;
        while j < m {
            op.apply(&basis[j], &mut w);
            matvecs += 1;
            project_out(deflate, &mut w);
            coeff[..=j].iter_mut().for_each(|c| *c = T::zero());
            for _ in 0..2 {
                for i in 0..=j {
                    let c = dot(&basis[i], &w);
                    axpy(-c, &basis[i], &mut w);
                    coeff[i] += c;
                }
            }
            for i in 0..=j {
                if i < locked && j == locked {
                    // couplings of kept Ritz vectors to the restart direction
                    h[i * m + j] = coeff[i];
                    h[j * m + i] = coeff[i];
                } else if i >= locked {
                    h[i * m + j] = coeff[i];
                    h[j * m + i] = coeff[i];
                }
            }
            beta = norm(&w);
            if beta <= breakdown {
                beta = T::zero();
                if j + 1 == m {
                    break;
                }
                match fresh_direction(&mut rng, n, deflate, &basis) {
                    Some(v) => basis.push(v),
                    None => {
                        size = j + 1;
                        break;
                    }
                }
            } else {
                let v: Vec<T> = w.iter().map(|&x| x / beta).collect();
                if j + 1 == m {
                    residual_dir = Some(v);
                } else {
                    basis.push(v);
                }
            }
            j += 1;
        }

        let hs: Vec<T> = (0..size)
            .flat_map(|i| (0..size).map(move |k| (i, k)))
            .map(|(i, k)| h[i * m + k])
            .collect();
        let (theta, s) = jacobi_eigen(&hs, size);
        let res = |i: usize| beta * s[(size - 1) * size + i].abs();
        let top = size - 1;
        let mut converged = res(top) <= tol && res(0) <= tol;
        if size >= 2 {
            if theta[top] - theta[top - 1] < T::c(10.0) * tol {
                converged &= res(top - 1) <= tol;
            }
            if theta[1] - theta[0] < T::c(10.0) * tol {
                converged &= res(1) <= tol;
            }
        }
        let exhausted = residual_dir.is_none() && beta == T::zero();
        if converged || exhausted {
            let ritz = |i: usize| {
                let mut y = vec![T::zero(); n];
                for (r, b) in basis.iter().take(size).enumerate() {
                    axpy(s[r * size + i], b, &mut y);
                }
                y
            };
            let true_residual = |i: usize| {
                let y = ritz(i);
                let mut ay = vec![T::zero(); n];
                op.apply(&y, &mut ay);
                project_out(deflate, &mut ay);
                axpy(-theta[i], &y, &mut ay);
                norm(&ay)
            };
            return Ok(LanczosOutcome {
                largest: theta[top],
                smallest: theta[0],
                largest_residual: true_residual(top),
                smallest_residual: true_residual(0),
                matvecs: matvecs + 2,
                restarts,
            });
        }
        if matvecs >= req.max_iterations {
            return Err(Error::NoConvergence(matvecs));
        }

        // restart from the extreme Ritz vectors plus the residual direction
        let keep: Vec<usize> = (0..keep_each).chain(size - keep_each..size).collect();
        let mut new_basis = Vec::with_capacity(m + 1);
        for &i in &keep {
            let mut y = vec![T::zero(); n];
            for (r, b) in basis.iter().take(size).enumerate() {
                axpy(s[r * size + i], b, &mut y);
            }
            new_basis.push(y);
        }
        h.iter_mut().for_each(|x| *x = T::zero());
        for (slot, &i) in keep.iter().enumerate() {
            h[slot * m + slot] = theta[i];
        }
        locked = keep.len();
        let next = residual_dir.expect("residual direction exists when not exhausted");
        new_basis.push(next);
        basis = new_basis;
        restarts += 1;
    }
}
