//! Distances in Schreier graphs: BFS, eccentricity, exact diameter,
//! essential diameter and the shortest relator of a generator set.

use std::collections::HashMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::actions::{GeneratorSet, GroupElement};
use crate::error::{Error, Result};
use crate::graph::{components, SchreierGraph};
use crate::modp::Sl2Element;
use crate::rng::StreamRng;

/// Marker for vertices not reached by a search.
pub const UNREACHED: u16 = u16::MAX;

/// Vertex count up to which [`essential_diameter`] uses all pairs.
pub const EXACT_PAIRS_LIMIT: usize = 5000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceField {
    pub source: usize,
    pub dist: Vec<u16>,
}

impl DistanceField {
    /// Largest finite distance.
    pub fn max_distance(&self) -> u16 {
        self.dist
            .iter()
            .copied()
            .filter(|&d| d != UNREACHED)
            .max()
            .unwrap_or(0)
    }

    pub fn reached(&self) -> usize {
        self.dist.iter().filter(|&&d| d != UNREACHED).count()
    }

    /// Eccentricity, or `None` if some vertex is unreachable.
    pub fn eccentricity(&self) -> Option<u32> {
        (self.reached() == self.dist.len()).then(|| self.max_distance() as u32)
    }

    /// `counts[d]` = number of vertices at distance `d`.
    pub fn level_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.max_distance() as usize + 1];
        for &d in &self.dist {
            if d != UNREACHED {
                counts[d as usize] += 1;
            }
        }
        counts
    }
}

/// Breadth-first distances from `source`; self-loops and parallel edges do
/// not affect distances.
pub fn bfs(g: &SchreierGraph, source: usize) -> DistanceField {
    let n = g.num_vertices();
    assert!(source < n, "source {source} out of range");
    let mut dist = vec![UNREACHED; n];
    let mut queue: Vec<u32> = Vec::with_capacity(n);
    dist[source] = 0;
    queue.push(source as u32);
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head] as usize;
        head += 1;
        let dv = dist[v];
        assert!(dv < UNREACHED - 1, "distance overflow");
        for &u in g.neighbors(v) {
            let u = u as usize;
            if dist[u] == UNREACHED {
                dist[u] = dv + 1;
                queue.push(u as u32);
            }
        }
    }
    DistanceField { source, dist }
}

fn connected_ecc(g: &SchreierGraph, v: usize) -> Result<(u32, DistanceField)> {
    let f = bfs(g, v);
    match f.eccentricity() {
        Some(e) => Ok((e, f)),
        None => Err(Error::NotConnected(components(g).count())),
    }
}

pub fn eccentricity(g: &SchreierGraph, v: usize) -> Result<u32> {
    check_vertex(g, v)?;
    Ok(connected_ecc(g, v)?.0)
}

/// Eccentricity of the chosen centre (`0` is the point `z = 0` on the
/// projective line).
pub fn radius_at(g: &SchreierGraph, v: usize) -> Result<u32> {
    eccentricity(g, v)
}

fn check_vertex(g: &SchreierGraph, v: usize) -> Result<()> {
    if v >= g.num_vertices() {
        return Err(Error::InvalidVertex {
            vertex: v as u64,
            size: g.num_vertices() as u64,
        });
    }
    Ok(())
}

/// Sources per bit-parallel sweep.
const LANES: usize = 64;

struct LaneSweep {
    /// Eccentricity per source, counting only reached vertices.
    ecc: Vec<u32>,
    /// `levels[d]` = pairs (source, v) at distance `d`, summed over sources.
    levels: Vec<u64>,
    all_reached: bool,
}

/// Simultaneous BFS from up to 64 sources, one bit per source. Each round
/// pulls the frontier bits of all neighbors of every vertex that is not yet
/// reached from every source.
fn sweep_lanes(g: &SchreierGraph, sources: &[u32]) -> LaneSweep {
    assert!(!sources.is_empty() && sources.len() <= LANES);
    let n = g.num_vertices();
    let full = u64::MAX >> (LANES - sources.len());
    let mut seen = vec![0u64; n];
    let mut frontier = vec![0u64; n];
    let mut next = vec![0u64; n];
    for (b, &s) in sources.iter().enumerate() {
        seen[s as usize] |= 1 << b;
        frontier[s as usize] |= 1 << b;
    }
    let mut ecc = vec![0u32; sources.len()];
    let mut levels = vec![sources.len() as u64];
    loop {
        let mut active = 0u64;
        let mut count = 0u64;
        for v in 0..n {
            let missing = full & !seen[v];
            if missing == 0 {
                next[v] = 0;
                continue;
            }
            let acc = g
                .neighbors(v)
                .iter()
                .fold(0u64, |a, &u| a | frontier[u as usize]);
            let new = acc & missing;
            next[v] = new;
            seen[v] |= new;
            active |= new;
            count += u64::from(new.count_ones());
        }
        if active == 0 {
            break;
        }
        let round = levels.len() as u32;
        levels.push(count);
        let mut bits = active;
        while bits != 0 {
            ecc[bits.trailing_zeros() as usize] = round;
            bits &= bits - 1;
        }
        std::mem::swap(&mut frontier, &mut next);
    }
    let all_reached = seen.iter().all(|&m| m == full);
    LaneSweep {
        ecc,
        levels,
        all_reached,
    }
}

/// Exact diameter with the number of BFS runs used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiameterResult {
    pub diameter: u32,
    pub bfs_runs: usize,
}

/// Exact diameter. With `transitive_hint` (vertex-transitive graphs such as
/// Cayley graphs) one BFS from vertex 0 suffices; otherwise iFUB.
pub fn diameter(g: &SchreierGraph, transitive_hint: bool) -> Result<u32> {
    Ok(diameter_detailed(g, transitive_hint)?.diameter)
}

pub fn diameter_detailed(g: &SchreierGraph, transitive_hint: bool) -> Result<DiameterResult> {
    if g.num_vertices() == 0 {
        return Ok(DiameterResult {
            diameter: 0,
            bfs_runs: 0,
        });
    }
    if transitive_hint {
        let (e, _) = connected_ecc(g, 0)?;
        return Ok(DiameterResult {
            diameter: e,
            bfs_runs: 1,
        });
    }
    ifub(g)
}

fn farthest(f: &DistanceField) -> usize {
    let m = f.max_distance();
    f.dist
        .iter()
        .position(|&d| d == m)
        .expect("source is reached")
}

/// Vertex on a shortest `a`–`b` path at distance `⌊d(a,b)/2⌋` from `a`.
fn midpoint(fa: &DistanceField, fb: &DistanceField) -> usize {
    let d = fa.dist[fb.source];
    let half = d / 2;
    (0..fa.dist.len())
        .find(|&x| fa.dist[x] == half && fb.dist[x] == d - half)
        .expect("shortest path exists")
}

/// iFUB: a 4-sweep picks a central vertex `u`; fringe levels of the BFS tree
/// of `u` are processed from the top until the lower bound exceeds
/// `2(i−1)`.
fn ifub(g: &SchreierGraph) -> Result<DiameterResult> {
    let mut runs = 0usize;
    let mut lb = 0u32;
    let sweep = |v: usize, lb: &mut u32, runs: &mut usize| -> Result<DistanceField> {
        let (e, f) = connected_ecc(g, v)?;
        *runs += 1;
        *lb = (*lb).max(e);
        Ok(f)
    };
    let f_r1 = sweep(0, &mut lb, &mut runs)?;
    let a1 = farthest(&f_r1);
    let f_a1 = sweep(a1, &mut lb, &mut runs)?;
    let b1 = farthest(&f_a1);
    let f_b1 = sweep(b1, &mut lb, &mut runs)?;
    let r2 = midpoint(&f_a1, &f_b1);
    let f_r2 = sweep(r2, &mut lb, &mut runs)?;
    let a2 = farthest(&f_r2);
    let f_a2 = sweep(a2, &mut lb, &mut runs)?;
    let b2 = farthest(&f_a2);
    let f_b2 = sweep(b2, &mut lb, &mut runs)?;
    let u = midpoint(&f_a2, &f_b2);
    drop((f_r1, f_a1, f_b1, f_r2, f_a2, f_b2));
    let f_u = sweep(u, &mut lb, &mut runs)?;

    let ecc_u = f_u.max_distance() as u32;
    let mut levels: Vec<Vec<u32>> = vec![Vec::new(); ecc_u as usize + 1];
    for (v, &d) in f_u.dist.iter().enumerate() {
        levels[d as usize].push(v as u32);
    }
    let mut i = ecc_u;
    let mut ub = 2 * ecc_u;
    while ub > lb && i > 0 {
        let level_max = levels[i as usize]
            .par_chunks(LANES)
            .map(|c| sweep_lanes(g, c).ecc.into_iter().max().unwrap_or(0))
            .max()
            .unwrap_or(0);
        runs += levels[i as usize].len();
        lb = lb.max(level_max);
        if lb > 2 * (i - 1) {
            return Ok(DiameterResult {
                diameter: lb,
                bfs_runs: runs,
            });
        }
        ub = 2 * (i - 1);
        i -= 1;
    }
    Ok(DiameterResult {
        diameter: lb,
        bfs_runs: runs,
    })
}

/// Diameter as the maximum eccentricity over every source.
pub fn diameter_all_sources(g: &SchreierGraph) -> Result<u32> {
    let all: Vec<u32> = (0..g.num_vertices() as u32).collect();
    let sweeps: Vec<LaneSweep> = all.par_chunks(LANES).map(|c| sweep_lanes(g, c)).collect();
    if sweeps.iter().any(|s| !s.all_reached) {
        return Err(Error::NotConnected(components(g).count()));
    }
    Ok(sweeps
        .iter()
        .flat_map(|s| s.ecc.iter().copied())
        .max()
        .unwrap_or(0))
}

/// Ordered pair counts by distance (`u ≠ v`) from the given sources.
pub fn distance_distribution(g: &SchreierGraph, sources: &[usize]) -> Result<Vec<u64>> {
    for &s in sources {
        check_vertex(g, s)?;
    }
    let sources: Vec<u32> = sources.iter().map(|&s| s as u32).collect();
    let sweeps: Vec<LaneSweep> = sources
        .par_chunks(LANES)
        .map(|c| sweep_lanes(g, c))
        .collect();
    let mut total: Vec<u64> = Vec::new();
    for s in sweeps {
        if !s.all_reached {
            return Err(Error::NotConnected(components(g).count()));
        }
        if s.levels.len() > total.len() {
            total.resize(s.levels.len(), 0);
        }
        for (t, x) in total.iter_mut().zip(s.levels) {
            *t += x;
        }
    }
    // drop the (source, source) pairs
    if let Some(t) = total.first_mut() {
        *t = 0;
    }
    Ok(total)
}

/// CSV with columns `distance,pair_count`.
pub fn write_distance_csv<W: Write>(counts: &[u64], mut w: W) -> Result<()> {
    writeln!(w, "distance,pair_count")?;
    for (d, c) in counts.iter().enumerate() {
        writeln!(w, "{d},{c}")?;
    }
    Ok(())
}

/// Smallest `h` with at least a `q` fraction of pairs at distance `< h`.
/// All pairs are used when `n ≤ 5000`; otherwise `sample_sources` uniform
/// sources drawn from the stream `(seed, n, 0)`, each with a full BFS.
pub fn essential_diameter(
    g: &SchreierGraph,
    q: f64,
    sample_sources: usize,
    seed: u64,
) -> Result<u32> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::OutOfRange(format!("quantile {q} not in (0, 1)")));
    }
    let n = g.num_vertices();
    if n < 2 {
        return Ok(1);
    }
    let sources: Vec<usize> = if n <= EXACT_PAIRS_LIMIT {
        (0..n).collect()
    } else {
        let mut rng = StreamRng::new(seed, n as u64, 0);
        (0..sample_sources.max(1))
            .map(|_| rng.below(n as u64) as usize)
            .collect()
    };
    let counts = distance_distribution(g, &sources)?;
    Ok(essential_from_counts(&counts, q))
}

/// Smallest `h` with `#{pairs at distance < h} ≥ q · total`.
pub fn essential_from_counts(counts: &[u64], q: f64) -> u32 {
    let total: u64 = counts.iter().sum();
    let need = q * total as f64;
    let mut below = 0u64;
    for (d, &c) in counts.iter().enumerate() {
        // `below` counts distances < d
        if below as f64 >= need {
            return d as u32;
        }
        below += c;
    }
    counts.len() as u32
}

/// `⌈log_{k−1}((n(k−2)+2)/k)⌉`, the Moore lower bound on the diameter of a
/// `k`-regular graph on `n` vertices (`k ≥ 3`).
pub fn moore_diameter_bound(n: usize, k: usize) -> u32 {
    assert!(k >= 3);
    let mut d = 0u32;
    // vertices within distance d of a point: 1 + k ((k-1)^d - 1)/(k-2)
    let mut reach: f64 = 1.0;
    let mut shell = k as f64;
    while reach < n as f64 {
        reach += shell;
        shell *= (k - 1) as f64;
        d += 1;
    }
    d
}

/// Shortest nontrivial relators of a matrix generator set, found by an
/// implicit BFS from the identity of SL2(Z/pZ) (or PSL2 for sets that are
/// symmetric only up to sign).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Girth {
    /// Shortest freely reduced word in the formal letters equal to the
    /// identity; parallel edges count (length 2).
    pub relator_length: Option<u32>,
    /// Girth of the underlying simple graph (cycles of length at least 3).
    pub simple_girth: Option<u32>,
    /// Word length of `-I`; `None` in PSL2 mode or beyond the search limit.
    pub minus_identity: Option<u32>,
    /// Shortest nontrivial word equal to `±I`.
    pub plus_minus_identity: Option<u32>,
    /// Some generator equals its own inverse, so `g² = I` is a relator of
    /// length 2 whenever `g` and `g⁻¹` are distinct letters.
    pub has_involution: bool,
    pub up_to_sign: bool,
    pub visited: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct GirthLimits {
    pub max_visited: usize,
}

impl Default for GirthLimits {
    fn default() -> Self {
        GirthLimits {
            max_visited: 20_000_000,
        }
    }
}

struct Node {
    dist: u16,
    letter: u8,
    parent: u64,
}

pub fn girth_at_identity(gens: &GeneratorSet, limits: GirthLimits) -> Result<Girth> {
    let mats = gens
        .matrices()
        .ok_or_else(|| Error::IncompatibleSpace("relators need matrix generators".into()))?;
    let p = gens
        .modulus()
        .ok_or_else(|| Error::IncompatibleSpace("empty generator set".into()))?;
    if mats.len() > 255 {
        return Err(Error::OutOfRange("at most 255 generators".into()));
    }
    let up_to_sign = gens.is_symmetric_up_to_sign_only();
    let key = |g: &Sl2Element| -> u64 {
        let i = g.index();
        if up_to_sign {
            i.min(g.neg().index())
        } else {
            i
        }
    };
    let has_involution = gens
        .elements()
        .iter()
        .any(|e| matches!(e, GroupElement::Sl2(g) if g.mul_unchecked(g).is_identity()));

    let id = Sl2Element::identity(p);
    let root = key(&id);
    let minus = (!up_to_sign).then(|| key(&id.neg()));
    let mut seen: HashMap<u64, Node> = HashMap::new();
    seen.insert(
        root,
        Node {
            dist: 0,
            letter: u8::MAX,
            parent: u64::MAX,
        },
    );
    let mut frontier: Vec<(u64, Sl2Element)> = vec![(root, id)];
    let mut relator: Option<u32> = None;
    let mut simple: Option<u32> = None;
    let mut minus_dist: Option<u32> = None;
    let mut level = 0u32;
    let mut truncated = false;

    let done = |relator: Option<u32>, simple: Option<u32>, minus_dist: Option<u32>, level: u32| {
        relator.is_some_and(|r| r <= 2 * level + 2)
            && simple.is_some_and(|s| s <= 2 * level + 2)
            && (minus.is_none() || minus_dist.is_some_and(|m| m <= 2 * level))
    };

    while !frontier.is_empty() {
        if let Some(mkey) = minus {
            // -I is central, so a shortest path to it splits at x, -x
            for (_, x) in &frontier {
                if let Some(nx) = seen.get(&key(&x.neg())) {
                    let cand = level + nx.dist as u32;
                    minus_dist = Some(minus_dist.map_or(cand, |m| m.min(cand)));
                }
            }
            if let Some(n) = seen.get(&mkey) {
                let d = n.dist as u32;
                minus_dist = Some(minus_dist.map_or(d, |m| m.min(d)));
            }
        }
        if done(relator, simple, minus_dist, level) {
            break;
        }
        let mut next = Vec::new();
        for (kx, x) in &frontier {
            let (xl, xp) = {
                let n = &seen[kx];
                (n.letter, n.parent)
            };
            let back = (xl != u8::MAX).then(|| gens.inverse_index(xl as usize));
            for (s, g) in mats.iter().enumerate() {
                let y = g.mul_unchecked(x);
                let ky = key(&y);
                match seen.get(&ky) {
                    None => {
                        seen.insert(
                            ky,
                            Node {
                                dist: level as u16 + 1,
                                letter: s as u8,
                                parent: *kx,
                            },
                        );
                        next.push((ky, y));
                    }
                    Some(ny) => {
                        let tree_edge = ny.parent == *kx && ny.letter as usize == s;
                        let cand = level + ny.dist as u32 + 1;
                        if Some(s) != back && !tree_edge {
                            relator = Some(relator.map_or(cand, |r| r.min(cand)));
                        }
                        if ky != *kx && ky != xp && ny.parent != *kx {
                            simple = Some(simple.map_or(cand, |r| r.min(cand)));
                        }
                    }
                }
            }
        }
        frontier = next;
        level += 1;
        if seen.len() > limits.max_visited {
            truncated = true;
            break;
        }
    }
    if truncated {
        // keep only values certified by the explored radius
        let lvl = level.saturating_sub(1);
        relator = relator.filter(|&r| r <= 2 * lvl + 2);
        simple = simple.filter(|&s| s <= 2 * lvl + 2);
        minus_dist = minus_dist.filter(|&m| m <= 2 * lvl);
    }
    let plus_minus = match (relator, minus_dist) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    Ok(Girth {
        relator_length: relator,
        simple_girth: simple,
        minus_identity: minus_dist,
        plus_minus_identity: plus_minus,
        has_involution,
        up_to_sign,
        visited: seen.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{
        fixed_generators, lps_generators, random_generators, Family, Provenance, VertexSpace,
    };
    use crate::graph::build_schreier;
    use crate::modp::Prime;

    fn lists(l: Vec<Vec<u32>>) -> SchreierGraph {
        SchreierGraph::from_neighbor_lists(l).unwrap()
    }

    fn cycle(n: u32) -> SchreierGraph {
        lists((0..n).map(|v| vec![(v + 1) % n, (v + n - 1) % n]).collect())
    }

    fn complete(n: u32) -> SchreierGraph {
        lists(
            (0..n)
                .map(|v| (0..n).filter(|&u| u != v).collect())
                .collect(),
        )
    }

    #[test]
    fn bfs_basics() {
        let g = cycle(6);
        let f = bfs(&g, 2);
        assert_eq!(f.dist[2], 0);
        assert_eq!(f.max_distance(), 3);
        assert_eq!(f.level_counts(), vec![1, 2, 2, 1]);
        for v in 0..6 {
            for &u in g.neighbors(v) {
                assert!((f.dist[v] as i32 - f.dist[u as usize] as i32).abs() <= 1);
            }
        }
    }

    #[test]
    fn small_eccentricities() {
        for v in 0..5 {
            assert_eq!(eccentricity(&complete(5), v).unwrap(), 1);
        }
        let path = lists(vec![vec![1], vec![0, 2], vec![1]]);
        assert_eq!(radius_at(&path, 1).unwrap(), 1);
        assert_eq!(radius_at(&path, 0).unwrap(), 2);
        let two = lists(vec![vec![1], vec![0], vec![2, 2]]);
        assert!(matches!(eccentricity(&two, 0), Err(Error::NotConnected(2))));
        assert!(eccentricity(&two, 7).is_err());
    }

    #[test]
    fn diameters() {
        assert_eq!(diameter(&cycle(6), false).unwrap(), 3);
        assert_eq!(diameter(&cycle(6), true).unwrap(), 3);
        assert_eq!(diameter(&cycle(7), false).unwrap(), 3);
        let path = lists(
            (0..9u32)
                .map(|v| {
                    let mut r = Vec::new();
                    if v > 0 {
                        r.push(v - 1);
                    }
                    if v < 8 {
                        r.push(v + 1);
                    }
                    r
                })
                .collect(),
        );
        assert_eq!(diameter(&path, false).unwrap(), 8);
    }

    #[test]
    fn lps_13_bfs_depth() {
        let p = Prime::new(13).unwrap();
        let g =
            build_schreier(&VertexSpace::ProjectiveLine(p), &lps_generators(p).unwrap()).unwrap();
        // Floyd–Warshall oracle
        let n = g.num_vertices();
        let mut d = vec![vec![u32::MAX / 4; n]; n];
        for v in 0..n {
            d[v][v] = 0;
            for &u in g.neighbors(v) {
                d[v][u as usize] = d[v][u as usize].min(1);
            }
        }
        for w in 0..n {
            for a in 0..n {
                for b in 0..n {
                    d[a][b] = d[a][b].min(d[a][w] + d[w][b]);
                }
            }
        }
        for s in 0..n {
            let f = bfs(&g, s);
            assert!((0..n).all(|v| f.dist[v] as u32 == d[s][v]));
        }
        let exact = d.iter().flatten().copied().max().unwrap();
        assert_eq!(diameter(&g, false).unwrap(), exact);
    }

    #[test]
    fn lanes_agree_with_single_bfs() {
        let p = Prime::new(211).unwrap();
        let g =
            build_schreier(&VertexSpace::ProjectiveLine(p), &random_generators(9, 2, p)).unwrap();
        // 70 sources with a repeat spill into a second, partial batch
        let sources: Vec<u32> = (0..69).map(|i| (i * 3) % 212).chain([6]).collect();
        let mut expect_levels = Vec::<u64>::new();
        let mut expect_ecc = Vec::new();
        for &s in &sources {
            let f = bfs(&g, s as usize);
            expect_ecc.push(f.max_distance() as u32);
            let c = f.level_counts();
            expect_levels.resize(expect_levels.len().max(c.len()), 0);
            for (t, x) in expect_levels.iter_mut().zip(c) {
                *t += x;
            }
        }
        let mut ecc = Vec::new();
        let mut levels = Vec::<u64>::new();
        for chunk in sources.chunks(LANES) {
            let s = sweep_lanes(&g, chunk);
            assert!(s.all_reached);
            ecc.extend(s.ecc);
            levels.resize(levels.len().max(s.levels.len()), 0);
            for (t, x) in levels.iter_mut().zip(s.levels) {
                *t += x;
            }
        }
        assert_eq!(ecc, expect_ecc);
        assert_eq!(levels, expect_levels);

        let two = lists(vec![vec![1], vec![0], vec![2]]);
        assert!(!sweep_lanes(&two, &[0, 2]).all_reached);
        assert!(matches!(
            diameter_all_sources(&two),
            Err(Error::NotConnected(2))
        ));
    }

    #[test]
    fn ifub_matches_all_sources_on_random_graphs() {
        for seed in 0..6 {
            let p = Prime::new(499).unwrap();
            let g = build_schreier(
                &VertexSpace::ProjectiveLine(p),
                &random_generators(seed, 2, p),
            )
            .unwrap();
            let exact = diameter_all_sources(&g).unwrap();
            assert_eq!(diameter(&g, false).unwrap(), exact);
            let r = radius_at(&g, 0).unwrap();
            assert!(r <= exact && exact <= 2 * r);
            assert!(exact >= moore_diameter_bound(500, 4));
        }
    }

    #[test]
    fn essential_examples() {
        assert_eq!(essential_diameter(&complete(6), 0.99, 0, 0).unwrap(), 2);
        let g = cycle(10);
        let e = essential_diameter(&g, 0.99, 0, 0).unwrap();
        assert!(e <= diameter(&g, true).unwrap() + 1);
        // distances on C10 from any vertex: 1,1,2,2,3,3,4,4,5 → 8/9 of pairs < 5
        assert_eq!(essential_diameter(&g, 0.5, 0, 0).unwrap(), 4);
        assert_eq!(essential_diameter(&g, 0.88, 0, 0).unwrap(), 5);
        assert_eq!(essential_diameter(&g, 0.9, 0, 0).unwrap(), 6);
        assert!(essential_diameter(&g, 1.0, 0, 0).is_err());
    }

    #[test]
    fn distance_csv() {
        let counts = distance_distribution(&cycle(4), &[0, 1, 2, 3]).unwrap();
        assert_eq!(counts, vec![0, 8, 4]);
        let mut out = Vec::new();
        write_distance_csv(&counts, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "distance,pair_count\n0,0\n1,8\n2,4\n"
        );
    }

    #[test]
    fn moore_bound_values() {
        assert_eq!(moore_diameter_bound(1, 4), 0);
        assert_eq!(moore_diameter_bound(5, 4), 1);
        assert_eq!(moore_diameter_bound(6, 4), 2);
        assert_eq!(moore_diameter_bound(17, 4), 2);
        assert_eq!(moore_diameter_bound(18, 4), 3);
    }

    #[test]
    fn involution_gives_length_two() {
        let p = Prime::new(13).unwrap();
        let minus = Sl2Element::new(-1, 0, 0, -1, p).unwrap();
        let t = Sl2Element::new(1, 1, 0, 1, p).unwrap();
        let set = GeneratorSet::from_elements(
            vec![minus.into(), minus.into(), t.into(), t.inv().into()],
            Provenance {
                family: Family::Custom,
                seed: None,
            },
        )
        .unwrap();
        let g = girth_at_identity(&set, GirthLimits::default()).unwrap();
        assert!(g.has_involution);
        assert_eq!(g.relator_length, Some(2));
        assert_eq!(g.minus_identity, Some(1));
        assert_eq!(g.plus_minus_identity, Some(1));
    }

    #[test]
    fn unipotent_relator_is_its_order() {
        // <u> with u = [[1,1],[0,1]] is cyclic of order p: relator u^p
        let p = Prime::new(7).unwrap();
        let u = Sl2Element::new(1, 1, 0, 1, p).unwrap();
        let set = GeneratorSet::from_elements(
            vec![u.into(), u.inv().into()],
            Provenance {
                family: Family::Custom,
                seed: None,
            },
        )
        .unwrap();
        let g = girth_at_identity(&set, GirthLimits::default()).unwrap();
        assert_eq!(g.relator_length, Some(7));
        assert_eq!(g.simple_girth, Some(7));
        assert_eq!(g.minus_identity, None);
    }

    #[test]
    fn fixed_set_girth_grows() {
        let mut last = 0;
        for p in [101u64, 499, 1009] {
            let p = Prime::new(p).unwrap();
            let g = girth_at_identity(&fixed_generators(p), GirthLimits::default()).unwrap();
            let r = g.relator_length.unwrap();
            assert!(r >= last);
            last = r;
        }
    }
}
