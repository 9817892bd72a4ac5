//! Eigenvalues of graph adjacency operators.

pub mod dense;
pub mod lanczos;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bipartition_signs, components, SchreierGraph};
use crate::scalar::Real;

pub use dense::{dense_eigenvalues, DenseMatrix, Entry, DEFAULT_DENSE_LIMIT};
pub use lanczos::{lanczos_extremes, EigenMode, EigenRequest, LanczosOutcome, SymmetricOperator};

/// Extreme nontrivial eigenvalues of a connected regular graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremePair<T> {
    /// Largest eigenvalue orthogonal to the constant vector.
    pub lambda2: T,
    /// Smallest eigenvalue, excluding `-k` when the graph is bipartite.
    pub lambda_min: T,
    pub bipartite: bool,
    /// Operator applications used (0 for the dense path).
    pub matvecs: usize,
}

impl<T: Real> ExtremePair<T> {
    /// `max(|λ₂|, |λ_min|)`.
    pub fn top_nontrivial(&self) -> T {
        self.lambda2.abs().max(self.lambda_min.abs())
    }
}

/// Full adjacency spectrum of a graph, ascending.
pub fn graph_spectrum<T: Real>(g: &SchreierGraph) -> Result<Vec<T>>
where
    T: Entry<R = T>,
{
    let m = DenseMatrix::from_row_major(g.num_vertices(), g.dense_adjacency::<T>())?;
    dense_eigenvalues(&m)
}

/// `λ₂` and `λ_min` of a connected regular graph. The constant vector (and
/// the `±1` bipartition vector when present) is projected out after every
/// operator application. `EigenMode::Full` computes the whole spectrum
/// densely instead.
pub fn extreme_nontrivial<T>(g: &SchreierGraph, req: &EigenRequest) -> Result<ExtremePair<T>>
where
    T: Real + Entry<R = T>,
{
    let comps = components(g);
    if !comps.is_connected() {
        return Err(Error::NotConnected(comps.count()));
    }
    let k = g.regular_degree()?;
    let n = g.num_vertices();
    let signs = bipartition_signs(g);
    let bipartite = signs.is_some();
    let trivial = 1 + usize::from(bipartite);
    if n <= trivial {
        return Err(Error::TooFewEigenvalues {
            got: n,
            need: trivial + 1,
        });
    }
    match req.mode {
        EigenMode::Full => {
            let ev = graph_spectrum::<T>(g)?;
            // the trivial eigenvalues are the extreme entries: k on top, -k at
            // the bottom when bipartite
            let lo = usize::from(bipartite);
            let hi = n - 1;
            Ok(ExtremePair {
                lambda2: ev[hi - 1],
                lambda_min: ev[lo],
                bipartite,
                matvecs: 0,
            })
        }
        EigenMode::ExtremePair => {
            let inv_sqrt = T::one() / T::of(n).sqrt();
            let mut deflate = vec![vec![inv_sqrt; n]];
            if let Some(s) = signs {
                deflate.push(s.iter().map(|&x| T::c(x as f64) * inv_sqrt).collect());
            }
            let out = lanczos_extremes(g, &deflate, T::of(k), req)?;
            Ok(ExtremePair {
                lambda2: out.largest,
                lambda_min: out.smallest,
                bipartite,
                matvecs: out.matvecs,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{lps_generators, VertexSpace};
    use crate::graph::build_schreier;
    use crate::modp::Prime;

    fn complete(n: u32) -> SchreierGraph {
        SchreierGraph::from_neighbor_lists(
            (0..n)
                .map(|v| (0..n).filter(|&u| u != v).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn complete_graph_k5() {
        for mode in [EigenMode::Full, EigenMode::ExtremePair] {
            let req = EigenRequest {
                mode,
                ..Default::default()
            };
            let r = extreme_nontrivial::<f64>(&complete(5), &req).unwrap();
            assert!((r.lambda2 + 1.0).abs() < 1e-10);
            assert!((r.lambda_min + 1.0).abs() < 1e-10);
            assert!(!r.bipartite);
        }
    }

    #[test]
    fn even_cycle_excludes_minus_k() {
        let n = 10u32;
        let g = SchreierGraph::from_neighbor_lists(
            (0..n).map(|v| vec![(v + 1) % n, (v + n - 1) % n]).collect(),
        )
        .unwrap();
        let want2 = 2.0 * (std::f64::consts::TAU / 10.0).cos();
        for mode in [EigenMode::Full, EigenMode::ExtremePair] {
            let r = extreme_nontrivial::<f64>(
                &g,
                &EigenRequest {
                    mode,
                    ..Default::default()
                },
            )
            .unwrap();
            assert!(r.bipartite);
            assert!((r.lambda2 - want2).abs() < 1e-9);
            assert!((r.lambda_min + want2).abs() < 1e-9);
        }
    }

    #[test]
    fn lps_13_iterative_matches_dense() {
        let p = Prime::new(13).unwrap();
        let g =
            build_schreier(&VertexSpace::ProjectiveLine(p), &lps_generators(p).unwrap()).unwrap();
        let dense = graph_spectrum::<f64>(&g).unwrap();
        let it = extreme_nontrivial::<f64>(&g, &EigenRequest::default()).unwrap();
        assert!((it.lambda2 - dense[12]).abs() < 1e-7);
        assert!((it.lambda_min - dense[0]).abs() < 1e-7);
        assert!(it.lambda2 < 4.0);
        // closed 2-walks: sum of squares equals the number of entries
        let sq: f64 = dense.iter().map(|x| x * x).sum();
        let walks: usize = (0..14)
            .map(|v| {
                g.neighbors(v)
                    .iter()
                    .map(|&u| {
                        g.neighbors(u as usize)
                            .iter()
                            .filter(|&&w| w as usize == v)
                            .count()
                    })
                    .sum::<usize>()
            })
            .sum();
        assert!((sq - walks as f64).abs() < 1e-9);
    }

    #[test]
    fn disconnected_is_rejected() {
        let g =
            SchreierGraph::from_neighbor_lists(vec![vec![1], vec![0], vec![3], vec![2]]).unwrap();
        assert!(matches!(
            extreme_nontrivial::<f64>(&g, &EigenRequest::default()),
            Err(Error::NotConnected(2))
        ));
    }

    #[test]
    fn degenerate_cayley_spectrum_matches_jacobi() {
        use crate::actions::{fixed_generators, random_generators};
        let p = Prime::new(5).unwrap();
        for gens in [fixed_generators(p), random_generators(0, 2, p)] {
            let g = build_schreier(&VertexSpace::FullGroup(p), &gens).unwrap();
            let ql = graph_spectrum::<f64>(&g).unwrap();
            let (jac, _) = dense::jacobi_eigen(&g.dense_adjacency::<f64>(), g.num_vertices());
            for (a, b) in ql.iter().zip(&jac) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn ql_deflates_between_zero_diagonals() {
        let mut d = vec![0.0f64; 4];
        let mut e = vec![1e-300, 1.0, 1e-30, 0.0];
        dense::tridiagonal_ql(&mut d, &mut e).unwrap();
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let want = [-1.0f64, 0.0, 0.0, 1.0];
        assert!(d.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-12));
    }
}
