//! Splitting spectra by representation sector.
//!
//! The projective-line graph carries the trivial and Steinberg sectors. The
//! punctured-plane graph commutes with scalar multiplication by `GF(p)^*`, so
//! its adjacency splits into one `(p+1)`-dimensional block per character
//! `χ_j(a^t) = ζ^{jt}`, `ζ = exp(2πi/(p-1))`.

use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::actions::{GeneratorSet, Provenance, VertexSpace};
use crate::error::{Error, Result};
use crate::modp::{add_mod, mul_mod, DlogTable, Prime};
use crate::scalar::Real;
use crate::spectra::dense::{dense_eigenvalues, DenseMatrix, Entry};
use crate::spectra::lanczos::{lanczos_extremes, EigenRequest, SymmetricOperator};
use crate::spectra::ExtremePair;

/// Largest prime for which dense sector blocks are built.
pub const DEFAULT_SECTOR_LIMIT: u64 = 20011;

const SPECTRAL_SLACK: f64 = 1e-9;
const TRIVIAL_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "j")]
pub enum Sector {
    WholeGraph,
    Trivial,
    Steinberg,
    PrincipalSeries(u32),
}

/// Sorted eigenvalues of one sector, with multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SpectrumSample<T> {
    pub p: Option<u64>,
    pub k: usize,
    pub sector: Sector,
    pub provenance: Option<Provenance>,
    pub eigenvalues: Vec<T>,
}

impl<T: Real> SpectrumSample<T> {
    /// Sorts `eigenvalues` and checks `|λ| ≤ k + 1e-9`.
    pub fn new(
        mut eigenvalues: Vec<T>,
        sector: Sector,
        k: usize,
        p: Option<u64>,
        provenance: Option<Provenance>,
    ) -> Result<Self> {
        let bound = T::of(k) + T::c(SPECTRAL_SLACK);
        if let Some(bad) = eigenvalues.iter().find(|x| !(x.abs() <= bound)) {
            return Err(Error::OutOfRange(format!(
                "eigenvalue {bad} exceeds the degree {k}"
            )));
        }
        eigenvalues.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        Ok(SpectrumSample {
            p,
            k,
            sector,
            provenance,
            eigenvalues,
        })
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// One JSON line, eigenvalues at full precision.
    pub fn to_json_line(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// Sparse description shared by all character blocks of one generator set:
/// for every generator `g` and point `P`, `g·v_P = a^t v_{P'}`.
#[derive(Debug)]
struct SectorPattern {
    p: Prime,
    k: usize,
    /// `(row P', column P, exponent t)`.
    entries: Vec<(u32, u32, u32)>,
    provenance: Provenance,
}

impl SectorPattern {
    /// `lift[P]` rescales the representative of `P` by `a^{lift[P]}`.
    fn build(p: Prime, gens: &GeneratorSet, lift: Option<&[u32]>) -> Result<Self> {
        gens.check_space(&VertexSpace::PuncturedAffinePlane(p))?;
        let mats = gens.matrices().expect("checked by check_space");
        let dlog = DlogTable::new(p);
        let q = p.get();
        let order = q - 1;
        let inf = q;
        let mut entries = Vec::with_capacity(mats.len() * (q as usize + 1));
        for g in &mats {
            let [a, b, c, d] = g.entries();
            for pt in 0..=q {
                let (x, y) = if pt == inf { (1, 0) } else { (pt, 1) };
                let xn = add_mod(mul_mod(a, x, q), mul_mod(b, y, q), q);
                let yn = add_mod(mul_mod(c, x, q), mul_mod(d, y, q), q);
                let (target, scalar) = if yn != 0 {
                    let yinv = crate::modp::inv_mod(yn, q).expect("nonzero");
                    (mul_mod(xn, yinv, q), yn)
                } else {
                    (inf, xn)
                };
                let mut t = dlog
                    .log(scalar)
                    .expect("image of a nonzero vector is nonzero");
                if let Some(l) = lift {
                    t = ((t as u64 + l[pt as usize] as u64 + (order - l[target as usize]) as u64)
                        % order as u64) as u32;
                }
                entries.push((target, pt, t));
            }
        }
        Ok(SectorPattern {
            p,
            k: mats.len(),
            entries,
            provenance: gens.provenance(),
        })
    }
}

/// Character block `j` of the punctured-plane adjacency.
#[derive(Clone, Debug)]
pub struct SectorBlock {
    j: u32,
    pattern: Arc<SectorPattern>,
}

impl SectorBlock {
    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn p(&self) -> Prime {
        self.pattern.p
    }

    pub fn degree(&self) -> usize {
        self.pattern.k
    }

    pub fn dim(&self) -> usize {
        self.pattern.p.get() as usize + 1
    }

    pub fn provenance(&self) -> Provenance {
        self.pattern.provenance
    }

    fn phases<T: Real>(&self) -> Vec<Complex<T>> {
        let order = self.pattern.p.get() as u64 - 1;
        let j = self.j as u64;
        (0..order)
            .map(|t| {
                let s = (j * t) % order;
                let angle = std::f64::consts::TAU * s as f64 / order as f64;
                Complex::new(T::c(angle.cos()), T::c(angle.sin()))
            })
            .collect()
    }

    /// Nonzero entries `(row, column, value)` with repeats.
    pub fn entries<T: Real>(&self) -> Vec<(usize, usize, Complex<T>)> {
        let ph = self.phases::<T>();
        self.pattern
            .entries
            .iter()
            .map(|&(r, c, t)| (r as usize, c as usize, ph[t as usize]))
            .collect()
    }

    pub fn dense<T>(&self) -> DenseMatrix<Complex<T>>
    where
        T: Real,
        Complex<T>: Entry<R = T>,
    {
        let mut m = DenseMatrix::zeros(self.dim());
        for (r, c, z) in self.entries::<T>() {
            m.add_to(r, c, z);
        }
        m
    }

    /// Real form `[[Re, -Im], [Im, Re]]` of dimension `2(p+1)`; each block
    /// eigenvalue appears twice.
    pub fn realified<T: Real>(&self) -> RealifiedBlock<T> {
        RealifiedBlock {
            n: self.dim(),
            entries: self.entries::<T>(),
        }
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues<T>(&self) -> Result<Vec<T>>
    where
        T: Real,
        Complex<T>: Entry<R = T>,
    {
        dense_eigenvalues(&self.dense::<T>())
    }
}

/// Sparse Hermitian block acting on `[Re z; Im z]`.
#[derive(Clone, Debug)]
pub struct RealifiedBlock<T> {
    n: usize,
    entries: Vec<(usize, usize, Complex<T>)>,
}

impl<T: Real> SymmetricOperator<T> for RealifiedBlock<T> {
    fn dim(&self) -> usize {
        2 * self.n
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        let n = self.n;
        y.iter_mut().for_each(|v| *v = T::zero());
        let (xr, xi) = x.split_at(n);
        let (yr, yi) = y.split_at_mut(n);
        for &(r, c, z) in &self.entries {
            yr[r] += z.re * xr[c] - z.im * xi[c];
            yi[r] += z.im * xr[c] + z.re * xi[c];
        }
    }
}

/// All character blocks `j = 0 … p-2`.
pub fn torus_sector_blocks(p: Prime, gens: &GeneratorSet) -> Result<Vec<SectorBlock>> {
    torus_sector_blocks_limited(p, gens, DEFAULT_SECTOR_LIMIT)
}

pub fn torus_sector_blocks_limited(
    p: Prime,
    gens: &GeneratorSet,
    limit: u64,
) -> Result<Vec<SectorBlock>> {
    let pattern = Arc::new(sector_pattern(p, gens, limit)?);
    Ok((0..p.get() - 1)
        .map(|j| SectorBlock {
            j,
            pattern: Arc::clone(&pattern),
        })
        .collect())
}

fn sector_pattern(p: Prime, gens: &GeneratorSet, limit: u64) -> Result<SectorPattern> {
    if p.as_u64() > limit {
        let dim = p.as_u64() + 1;
        return Err(Error::SizeOverflow {
            n: dim,
            entries: dim * dim,
            budget: (limit + 1) * (limit + 1),
        });
    }
    SectorPattern::build(p, gens, None)
}

/// One character block without building the others.
pub fn sector_block(p: Prime, gens: &GeneratorSet, j: u32) -> Result<SectorBlock> {
    if j >= p.get() - 1 {
        return Err(Error::OutOfRange(format!(
            "character index {j} not below {}",
            p.get() - 1
        )));
    }
    Ok(SectorBlock {
        j,
        pattern: Arc::new(sector_pattern(p, gens, DEFAULT_SECTOR_LIMIT)?),
    })
}

/// Removes the trivial eigenvalue `k` (and `-k` when bipartite) from a full
/// projective spectrum.
pub fn steinberg_spectrum<T: Real>(
    projective_spectrum: &[T],
    k: usize,
    bipartite: bool,
) -> Result<SpectrumSample<T>> {
    let kk = T::of(k);
    let tol = T::c(TRIVIAL_TOL);
    let mut ev = projective_spectrum.to_vec();
    ev.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let at_top = ev.iter().filter(|&&x| (x - kk).abs() <= tol).count();
    if at_top == 0 {
        return Err(Error::MissingTrivialEigenvalue(k as f64));
    }
    if at_top > 1 {
        return Err(Error::DisconnectedSpectrum {
            count: at_top,
            k: k as f64,
        });
    }
    ev.pop();
    if bipartite {
        if ev.first().map_or(true, |&x| (x + kk).abs() > tol) {
            return Err(Error::MissingTrivialEigenvalue(-(k as f64)));
        }
        ev.remove(0);
    }
    let p = ev.len() as u64;
    SpectrumSample::new(ev, Sector::Steinberg, k, Some(p), None)
}

/// Spectrum of character block `j`, `0 < j < p-1`.
pub fn monochromatic_spectrum<T>(p: Prime, gens: &GeneratorSet, j: u32) -> Result<SpectrumSample<T>>
where
    T: Real,
    Complex<T>: Entry<R = T>,
{
    if j == 0 {
        return Err(Error::OutOfRange("character index must be nonzero".into()));
    }
    let block = sector_block(p, gens, j)?;
    SpectrumSample::new(
        block.eigenvalues()?,
        Sector::PrincipalSeries(j),
        block.degree(),
        Some(p.as_u64()),
        Some(gens.provenance()),
    )
}

/// Characters counted as irreducible principal series: all `j` except `0`
/// and `(p-1)/2`.
pub fn principal_series_indices(p: Prime) -> impl Iterator<Item = u32> {
    let half = (p.get() - 1) / 2;
    (1..p.get() - 1).filter(move |&j| j != half)
}

/// Full punctured-plane spectrum as the union of all block spectra.
pub fn affine_spectrum_by_sectors(p: Prime, gens: &GeneratorSet) -> Result<Vec<f64>> {
    let mut all = Vec::with_capacity((p.get() as usize - 1) * (p.get() as usize + 1));
    for block in torus_sector_blocks(p, gens)? {
        all.extend(block.eigenvalues::<f64>()?);
    }
    all.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    Ok(all)
}

/// `λ₂` and `λ_min` of the punctured-plane graph, block by block with
/// Lanczos. Block 0 is the projective graph with its constant vector
/// deflated. Blocks `j` and `p-1-j` are conjugate, so only `j ≤ (p-1)/2` are
/// solved.
pub fn affine_extreme_nontrivial(
    p: Prime,
    gens: &GeneratorSet,
    req: &EigenRequest,
) -> Result<ExtremePair<f64>> {
    let proj = crate::graph::build_schreier(&VertexSpace::ProjectiveLine(p), gens)?;
    let mut best = crate::spectra::extreme_nontrivial::<f64>(&proj, req)?;
    let pattern = Arc::new(SectorPattern::build(p, gens, None)?);
    let k = pattern.k as f64;
    for j in 1..=(p.get() - 1) / 2 {
        let block = SectorBlock {
            j,
            pattern: Arc::clone(&pattern),
        };
        let op = block.realified::<f64>();
        let out = lanczos_extremes(&op, &[], k, req)?;
        best.lambda2 = best.lambda2.max(out.largest);
        best.lambda_min = best.lambda_min.min(out.smallest);
        best.matvecs += out.matvecs;
    }
    Ok(best)
}
