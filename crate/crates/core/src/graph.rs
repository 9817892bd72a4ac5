//! Regular Schreier multigraphs in compressed adjacency form.
//!
//! Row `x` lists `s·x` for every generator `s`, sorted. Fixed points give
//! self-loops and coincident images give parallel edges, so every row of a
//! graph built from `k` generators has exactly `k` entries.

use std::io::{Read, Write};
use std::sync::Arc;

use rayon::prelude::*;

use crate::actions::{linear, mobius, GeneratorSet, GroupElement, SpaceKind, VertexSpace};
use crate::error::{Error, Result};
use crate::modp::Sl2Element;
use crate::scalar::Real;

/// Default cap on stored adjacency entries (4 bytes each).
pub const DEFAULT_MAX_ENTRIES: u64 = 600_000_000;

const DUMP_MAGIC: &[u8; 8] = b"SCHRGRPH";
const NO_SPACE: u32 = u32::MAX;
const IRREGULAR: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Offsets {
    /// Row `v` starts at `v * k`.
    Regular(usize),
    Explicit(Vec<u64>),
}

#[derive(Clone, Debug)]
pub struct SchreierGraph {
    n: usize,
    offsets: Offsets,
    neighbors: Vec<u32>,
    space: Option<VertexSpace>,
    generators: Option<Arc<GeneratorSet>>,
}

impl SchreierGraph {
    /// Graph from explicit adjacency lists (multigraph semantics: a self-loop
    /// is one entry in its own row). Lists must be symmetric as multisets.
    pub fn from_neighbor_lists(mut lists: Vec<Vec<u32>>) -> Result<Self> {
        let n = lists.len();
        for row in lists.iter_mut() {
            if let Some(&bad) = row.iter().find(|&&u| u as usize >= n) {
                return Err(Error::InvalidVertex {
                    vertex: bad as u64,
                    size: n as u64,
                });
            }
            row.sort_unstable();
        }
        let k = lists.first().map_or(0, Vec::len);
        let offsets = if lists.iter().all(|r| r.len() == k) {
            Offsets::Regular(k)
        } else {
            let mut off = Vec::with_capacity(n + 1);
            off.push(0u64);
            for r in &lists {
                off.push(off.last().unwrap() + r.len() as u64);
            }
            Offsets::Explicit(off)
        };
        let g = SchreierGraph {
            n,
            offsets,
            neighbors: lists.concat(),
            space: None,
            generators: None,
        };
        if let Some(v) = g.first_asymmetric_vertex() {
            return Err(Error::AsymmetricAdjacency(v));
        }
        Ok(g)
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    /// Common degree when the graph is regular.
    pub fn degree(&self) -> Option<usize> {
        match &self.offsets {
            Offsets::Regular(k) => Some(*k),
            Offsets::Explicit(_) => None,
        }
    }

    pub fn regular_degree(&self) -> Result<usize> {
        self.degree().ok_or(Error::NotRegular)
    }

    #[inline]
    fn row_range(&self, v: usize) -> (usize, usize) {
        match &self.offsets {
            Offsets::Regular(k) => (v * k, (v + 1) * k),
            Offsets::Explicit(off) => (off[v] as usize, off[v + 1] as usize),
        }
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        let (a, b) = self.row_range(v);
        &self.neighbors[a..b]
    }

    pub fn vertex_degree(&self, v: usize) -> usize {
        let (a, b) = self.row_range(v);
        b - a
    }

    /// Total number of stored edge endpoints (`n·k` for regular graphs).
    pub fn num_entries(&self) -> usize {
        self.neighbors.len()
    }

    pub fn space(&self) -> Option<&VertexSpace> {
        self.space.as_ref()
    }

    pub fn generators(&self) -> Option<&GeneratorSet> {
        self.generators.as_deref()
    }

    /// Trace of the adjacency matrix.
    pub fn self_loops(&self) -> usize {
        (0..self.n)
            .map(|v| {
                self.neighbors(v)
                    .iter()
                    .filter(|&&u| u as usize == v)
                    .count()
            })
            .sum()
    }

    /// Row offsets as stored in the binary dump.
    pub fn row_offsets(&self) -> Vec<u64> {
        match &self.offsets {
            Offsets::Regular(k) => (0..=self.n as u64).map(|v| v * *k as u64).collect(),
            Offsets::Explicit(off) => off.clone(),
        }
    }

    pub fn raw_neighbors(&self) -> &[u32] {
        &self.neighbors
    }

    /// Row-major dense adjacency matrix.
    pub fn dense_adjacency<T: Real>(&self) -> Vec<T> {
        let n = self.n;
        let mut a = vec![T::zero(); n * n];
        for v in 0..n {
            for &u in self.neighbors(v) {
                a[v * n + u as usize] += T::one();
            }
        }
        a
    }

    /// `y = A x`.
    pub fn matvec<T: Real>(&self, x: &[T], y: &mut [T]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        let row = |(v, out): (usize, &mut T)| {
            let mut acc = T::zero();
            for &u in self.neighbors(v) {
                acc += x[u as usize];
            }
            *out = acc;
        };
        if self.n >= 1 << 16 {
            y.par_iter_mut().enumerate().for_each(row);
        } else {
            y.iter_mut().enumerate().for_each(row);
        }
    }

    fn first_asymmetric_vertex(&self) -> Option<usize> {
        // u appears in row v as often as v appears in row u; rows are sorted
        let count = |row: &[u32], x: u32| {
            let lo = row.partition_point(|&y| y < x);
            let hi = row.partition_point(|&y| y <= x);
            hi - lo
        };
        (0..self.n).find(|&v| {
            let row = self.neighbors(v);
            let mut i = 0;
            while i < row.len() {
                let u = row[i];
                let c = count(row, u);
                if count(self.neighbors(u as usize), v as u32) != c {
                    return true;
                }
                i += c;
            }
            false
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetric_vertex().is_none()
    }

    /// Binary dump: magic `SCHRGRPH`, `n` (u64), `k` (u32, `u32::MAX` when
    /// irregular), space kind (u32: 0 projective, 1 affine, 2 group, 3 perm,
    /// `u32::MAX` none), size parameter `p` or `n` (u64), then `n + 1` row
    /// offsets (u64) and the neighbor indices (u32). All little-endian.
    pub fn write_dump<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(DUMP_MAGIC)?;
        w.write_all(&(self.n as u64).to_le_bytes())?;
        let k = self.degree().map_or(IRREGULAR, |k| k as u32);
        w.write_all(&k.to_le_bytes())?;
        let (kind, param) = match &self.space {
            Some(s) => (kind_code(s.kind()), s.size_param()),
            None => (NO_SPACE, 0),
        };
        w.write_all(&kind.to_le_bytes())?;
        w.write_all(&param.to_le_bytes())?;
        let mut buf = Vec::with_capacity(1 << 16);
        for off in self.row_offsets() {
            buf.extend_from_slice(&off.to_le_bytes());
            if buf.len() >= 1 << 16 {
                w.write_all(&buf)?;
                buf.clear();
            }
        }
        for &u in &self.neighbors {
            buf.extend_from_slice(&u.to_le_bytes());
            if buf.len() >= 1 << 16 {
                w.write_all(&buf)?;
                buf.clear();
            }
        }
        w.write_all(&buf)?;
        Ok(())
    }

    /// Reads a dump written by [`write_dump`](Self::write_dump). The space is
    /// restored; the generator set is not part of the format.
    pub fn read_dump<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != DUMP_MAGIC {
            return Err(Error::Format("bad graph dump magic".into()));
        }
        let n = read_u64(&mut r)? as usize;
        let k = read_u32(&mut r)?;
        let kind = read_u32(&mut r)?;
        let param = read_u64(&mut r)?;
        let mut offsets = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            offsets.push(read_u64(&mut r)?);
        }
        if offsets[0] != 0 || offsets.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Format("row offsets not monotone".into()));
        }
        let entries = offsets[n] as usize;
        let mut bytes = vec![0u8; entries * 4];
        r.read_exact(&mut bytes)?;
        let neighbors: Vec<u32> = bytes
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        if neighbors.iter().any(|&u| u as usize >= n) {
            return Err(Error::Format("neighbor index out of range".into()));
        }
        let offsets = if k != IRREGULAR {
            let k = k as usize;
            if offsets
                .iter()
                .enumerate()
                .any(|(v, &o)| o != (v * k) as u64)
            {
                return Err(Error::Format(
                    "declared regular but offsets disagree".into(),
                ));
            }
            Offsets::Regular(k)
        } else {
            Offsets::Explicit(offsets)
        };
        let space = match kind {
            NO_SPACE => None,
            code => Some(VertexSpace::new(kind_from_code(code)?, param)?),
        };
        Ok(SchreierGraph {
            n,
            offsets,
            neighbors,
            space,
            generators: None,
        })
    }
}

fn kind_code(kind: SpaceKind) -> u32 {
    match kind {
        SpaceKind::Projective => 0,
        SpaceKind::Affine => 1,
        SpaceKind::Group => 2,
        SpaceKind::Perm => 3,
    }
}

fn kind_from_code(code: u32) -> Result<SpaceKind> {
    Ok(match code {
        0 => SpaceKind::Projective,
        1 => SpaceKind::Affine,
        2 => SpaceKind::Group,
        3 => SpaceKind::Perm,
        other => return Err(Error::Format(format!("unknown space code {other}"))),
    })
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

/// Builds Schreier graphs under a memory budget.
#[derive(Clone, Copy, Debug)]
pub struct GraphBuilder {
    pub max_entries: u64,
}

impl Default for GraphBuilder {
    fn default() -> Self {
        GraphBuilder {
            max_entries: DEFAULT_MAX_ENTRIES,
        }
    }
}

impl GraphBuilder {
    pub fn with_budget(max_entries: u64) -> Self {
        GraphBuilder { max_entries }
    }

    pub fn build(&self, space: &VertexSpace, gens: &GeneratorSet) -> Result<SchreierGraph> {
        gens.check_space(space)?;
        let n64 = space.vertex_count();
        let k = gens.len();
        let entries = n64.saturating_mul(k as u64);
        if entries > self.max_entries || n64 > u32::MAX as u64 {
            return Err(Error::SizeOverflow {
                n: n64,
                entries,
                budget: self.max_entries,
            });
        }
        let n = n64 as usize;
        let mut neighbors = vec![0u32; n * k];
        if k > 0 {
            match space {
                VertexSpace::PermutationDomain(_) => {
                    let perms: Vec<_> = gens
                        .elements()
                        .iter()
                        .map(|e| match e {
                            GroupElement::Perm(s) => s.clone(),
                            GroupElement::Sl2(_) => unreachable!("checked by check_space"),
                        })
                        .collect();
                    fill_rows(&mut neighbors, k, |v, i| perms[i].apply(v as u32));
                }
                _ => {
                    let mats: Vec<Sl2Element> = gens.matrices().expect("checked by check_space");
                    match space {
                        VertexSpace::ProjectiveLine(_) => {
                            fill_rows(&mut neighbors, k, |v, i| mobius(&mats[i], v as u64) as u32)
                        }
                        VertexSpace::PuncturedAffinePlane(_) => {
                            fill_rows(&mut neighbors, k, |v, i| linear(&mats[i], v as u64) as u32)
                        }
                        VertexSpace::FullGroup(p) => {
                            let p = *p;
                            neighbors
                                .par_chunks_mut(k)
                                .enumerate()
                                .for_each(|(v, row)| {
                                    let h = Sl2Element::from_index_unchecked(v as u64, p);
                                    for (slot, g) in row.iter_mut().zip(&mats) {
                                        *slot = g.mul_unchecked(&h).index() as u32;
                                    }
                                    row.sort_unstable();
                                });
                        }
                        VertexSpace::PermutationDomain(_) => unreachable!(),
                    }
                }
            }
        }
        Ok(SchreierGraph {
            n,
            offsets: Offsets::Regular(k),
            neighbors,
            space: Some(*space),
            generators: Some(Arc::new(gens.clone())),
        })
    }
}

fn fill_rows<F>(neighbors: &mut [u32], k: usize, image: F)
where
    F: Fn(usize, usize) -> u32 + Sync,
{
    neighbors
        .par_chunks_mut(k)
        .enumerate()
        .for_each(|(v, row)| {
            for (i, slot) in row.iter_mut().enumerate() {
                *slot = image(v, i);
            }
            row.sort_unstable();
        });
}

/// Builds the Schreier graph of `gens` acting on `space` with the default
/// memory budget.
pub fn build_schreier(space: &VertexSpace, gens: &GeneratorSet) -> Result<SchreierGraph> {
    GraphBuilder::default().build(space, gens)
}

/// Connected components: per-vertex labels in discovery order and sizes.
#[derive(Clone, Debug)]
pub struct Components {
    pub labels: Vec<u32>,
    pub sizes: Vec<usize>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_connected(&self) -> bool {
        self.sizes.len() <= 1
    }
}

pub fn components(g: &SchreierGraph) -> Components {
    let n = g.num_vertices();
    let mut labels = vec![u32::MAX; n];
    let mut sizes = Vec::new();
    let mut queue = Vec::new();
    for s in 0..n {
        if labels[s] != u32::MAX {
            continue;
        }
        let label = sizes.len() as u32;
        labels[s] = label;
        queue.clear();
        queue.push(s as u32);
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head] as usize;
            head += 1;
            for &u in g.neighbors(v) {
                if labels[u as usize] == u32::MAX {
                    labels[u as usize] = label;
                    queue.push(u);
                }
            }
        }
        sizes.push(queue.len());
    }
    Components { labels, sizes }
}

/// Component sizes in discovery order; they sum to `n`.
pub fn connected_components(g: &SchreierGraph) -> Vec<usize> {
    components(g).sizes
}

/// Two-colourability of each component, in the order of [`components`].
/// A self-loop makes its component non-bipartite.
pub fn is_bipartite(g: &SchreierGraph) -> Vec<bool> {
    let comps = components(g);
    let mut colour = vec![u8::MAX; g.num_vertices()];
    let mut verdict = vec![true; comps.count()];
    let mut queue = Vec::new();
    for s in 0..g.num_vertices() {
        if colour[s] != u8::MAX {
            continue;
        }
        let label = comps.labels[s] as usize;
        colour[s] = 0;
        queue.clear();
        queue.push(s);
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            for &u in g.neighbors(v) {
                let u = u as usize;
                if colour[u] == u8::MAX {
                    colour[u] = 1 - colour[v];
                    queue.push(u);
                } else if colour[u] == colour[v] {
                    verdict[label] = false;
                }
            }
        }
    }
    verdict
}

/// `±1` colouring vector of a connected bipartite graph, if it is one.
pub fn bipartition_signs(g: &SchreierGraph) -> Option<Vec<i8>> {
    let n = g.num_vertices();
    if n == 0 {
        return None;
    }
    let mut sign = vec![0i8; n];
    sign[0] = 1;
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        for &u in g.neighbors(v) {
            let u = u as usize;
            if sign[u] == 0 {
                sign[u] = -sign[v];
                queue.push(u);
            } else if sign[u] == sign[v] {
                return None;
            }
        }
    }
    if queue.len() != n {
        return None;
    }
    Some(sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{
        fixed_generators, lps_generators, random_generators, random_permutations, Family,
        Provenance,
    };
    use crate::modp::Prime;

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    pub(crate) fn cycle(n: u32) -> SchreierGraph {
        SchreierGraph::from_neighbor_lists(
            (0..n).map(|v| vec![(v + 1) % n, (v + n - 1) % n]).collect(),
        )
        .unwrap()
    }

    fn check_regular_symmetric(g: &SchreierGraph, k: usize) {
        assert_eq!(g.degree(), Some(k));
        assert_eq!(g.num_entries(), g.num_vertices() * k);
        assert!(g.is_symmetric());
    }

    #[test]
    fn projective_and_affine_sizes() {
        let p = pr(5);
        let s = fixed_generators(p);
        let proj = build_schreier(&VertexSpace::ProjectiveLine(p), &s).unwrap();
        assert_eq!(proj.num_vertices(), 6);
        check_regular_symmetric(&proj, 4);
        let aff = build_schreier(&VertexSpace::PuncturedAffinePlane(p), &s).unwrap();
        assert_eq!(aff.num_vertices(), 24);
        check_regular_symmetric(&aff, 4);
        // [[1,2],[0,1]] fixes exactly (x, 0), as does its inverse
        for x in 1..5u32 {
            let v = crate::actions::affine_index(x, 0, p) as usize;
            assert_eq!(
                aff.neighbors(v)
                    .iter()
                    .filter(|&&u| u as usize == v)
                    .count(),
                2
            );
        }
        // the lower unipotents fix (0, y) likewise
        assert_eq!(aff.self_loops(), 16);
    }

    #[test]
    fn full_group_of_order_24() {
        let p = pr(3);
        let g = build_schreier(&VertexSpace::FullGroup(p), &random_generators(1, 2, p)).unwrap();
        assert_eq!(g.num_vertices(), 24);
        check_regular_symmetric(&g, 4);
    }

    #[test]
    fn symmetric_exhaustively_for_small_primes() {
        for p in [5u64, 7, 11, 13] {
            let prime = pr(p);
            for gens in [fixed_generators(prime), random_generators(p, 2, prime)] {
                for space in [
                    VertexSpace::ProjectiveLine(prime),
                    VertexSpace::PuncturedAffinePlane(prime),
                    VertexSpace::FullGroup(prime),
                ] {
                    check_regular_symmetric(&build_schreier(&space, &gens).unwrap(), 4);
                }
            }
        }
        let perm = random_permutations(4, 3, 200);
        check_regular_symmetric(
            &build_schreier(&VertexSpace::PermutationDomain(200), &perm).unwrap(),
            6,
        );
    }

    #[test]
    fn lps_projective_13_is_connected_and_not_bipartite() {
        let p = pr(13);
        let g =
            build_schreier(&VertexSpace::ProjectiveLine(p), &lps_generators(p).unwrap()).unwrap();
        check_regular_symmetric(&g, 4);
        assert_eq!(connected_components(&g), vec![14]);
        assert_eq!(is_bipartite(&g), vec![false]);
    }

    #[test]
    fn small_order_generator_splits_the_line() {
        // [[0,-1],[1,0]] has order 4 and orbits of size <= 2 on P^1
        let p = pr(13);
        let g = Sl2Element::new(0, -1, 1, 0, p).unwrap();
        let set = GeneratorSet::from_elements(
            vec![g.into(), g.inv().into()],
            Provenance {
                family: Family::Custom,
                seed: None,
            },
        )
        .unwrap();
        let graph = build_schreier(&VertexSpace::ProjectiveLine(p), &set).unwrap();
        let sizes = connected_components(&graph);
        assert!(sizes.len() > 1);
        assert_eq!(sizes.iter().sum::<usize>(), 14);
    }

    #[test]
    fn empty_generator_set_gives_singletons() {
        let p = pr(7);
        let empty = GeneratorSet::from_elements(
            vec![],
            Provenance {
                family: Family::Custom,
                seed: None,
            },
        )
        .unwrap();
        let g = build_schreier(&VertexSpace::ProjectiveLine(p), &empty).unwrap();
        assert_eq!(connected_components(&g), vec![1; 8]);
    }

    #[test]
    fn bipartite_examples() {
        let loops = SchreierGraph::from_neighbor_lists(vec![vec![0, 0]]).unwrap();
        assert_eq!(is_bipartite(&loops), vec![false]);
        assert_eq!(is_bipartite(&cycle(4)), vec![true]);
        assert_eq!(is_bipartite(&cycle(5)), vec![false]);
        assert!(bipartition_signs(&cycle(6)).is_some());
        assert!(bipartition_signs(&cycle(7)).is_none());
    }

    #[test]
    fn rejects_asymmetric_lists() {
        let err = SchreierGraph::from_neighbor_lists(vec![vec![1], vec![]]).unwrap_err();
        assert!(matches!(err, Error::AsymmetricAdjacency(0)));
        let err = SchreierGraph::from_neighbor_lists(vec![vec![1, 1], vec![0]]).unwrap_err();
        assert!(matches!(err, Error::AsymmetricAdjacency(_)));
    }

    #[test]
    fn budget_is_enforced() {
        let p = pr(101);
        let err = GraphBuilder::with_budget(1000)
            .build(&VertexSpace::FullGroup(p), &fixed_generators(p))
            .unwrap_err();
        assert!(matches!(err, Error::SizeOverflow { .. }));
    }

    #[test]
    fn lps_needs_projective_space() {
        let p = pr(13);
        let err = build_schreier(&VertexSpace::FullGroup(p), &lps_generators(p).unwrap());
        assert!(matches!(err, Err(Error::NotSymmetric)));
    }

    #[test]
    fn dump_round_trip() {
        let p = pr(11);
        let g =
            build_schreier(&VertexSpace::PuncturedAffinePlane(p), &fixed_generators(p)).unwrap();
        let mut bytes = Vec::new();
        g.write_dump(&mut bytes).unwrap();
        assert_eq!(&bytes[..8], b"SCHRGRPH");
        assert_eq!(bytes.len(), 8 + 8 + 4 + 4 + 8 + 8 * 121 + 4 * 480);
        let back = SchreierGraph::read_dump(&bytes[..]).unwrap();
        assert_eq!(back.num_vertices(), g.num_vertices());
        assert_eq!(back.degree(), Some(4));
        assert_eq!(back.raw_neighbors(), g.raw_neighbors());
        assert_eq!(back.space(), g.space());

        let path = SchreierGraph::from_neighbor_lists(vec![vec![1], vec![0, 2], vec![1]]).unwrap();
        let mut bytes = Vec::new();
        path.write_dump(&mut bytes).unwrap();
        let back = SchreierGraph::read_dump(&bytes[..]).unwrap();
        assert_eq!(back.degree(), None);
        assert_eq!(back.neighbors(1), &[0, 2]);
        assert!(SchreierGraph::read_dump(&b"NOTAGRAPH......."[..]).is_err());
    }

    #[test]
    fn matvec_matches_dense() {
        let p = pr(13);
        let g =
            build_schreier(&VertexSpace::ProjectiveLine(p), &random_generators(3, 2, p)).unwrap();
        let a = g.dense_adjacency::<f64>();
        let x: Vec<f64> = (0..14).map(|i| (i as f64).sin()).collect();
        let mut y = vec![0.0; 14];
        g.matvec(&x, &mut y);
        for i in 0..14 {
            let d: f64 = (0..14).map(|j| a[i * 14 + j] * x[j]).sum();
            assert!((d - y[i]).abs() < 1e-12);
        }
    }
}
