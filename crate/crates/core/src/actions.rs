//! Generator sets and the group actions that define the vertex spaces.
//!
//! Vertex indexing (stable, used by persisted data):
//!
//! * projective line: `z` in `0..p` is index `z`, the point at infinity is `p`;
//! * punctured affine plane: column vector `(x, y)` is index `x*p + y - 1`;
//! * full group: [`Sl2Element::index`];
//! * permutation domain: the point itself.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modp::{add_mod, inv_mod, mul_mod, FieldElement, Prime, Sl2Element};
use crate::rng::StreamRng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Projective,
    Affine,
    Group,
    Perm,
}

impl SpaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SpaceKind::Projective => "projective",
            SpaceKind::Affine => "affine",
            SpaceKind::Group => "group",
            SpaceKind::Perm => "perm",
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SpaceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "projective" => Ok(SpaceKind::Projective),
            "affine" => Ok(SpaceKind::Affine),
            "group" => Ok(SpaceKind::Group),
            "perm" => Ok(SpaceKind::Perm),
            other => Err(Error::Config(format!("unknown space '{other}'"))),
        }
    }
}

/// The set a generator set acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexSpace {
    /// P^1(Z/pZ) under Möbius transformations, `p + 1` points.
    ProjectiveLine(Prime),
    /// A^2(Z/pZ) minus the origin under linear maps, `p^2 - 1` points.
    PuncturedAffinePlane(Prime),
    /// SL2(Z/pZ) under left multiplication, `p^3 - p` points.
    FullGroup(Prime),
    /// `{0, .., n-1}` under permutations.
    PermutationDomain(u32),
}

impl VertexSpace {
    pub fn new(kind: SpaceKind, size: u64) -> Result<Self> {
        Ok(match kind {
            SpaceKind::Projective => VertexSpace::ProjectiveLine(Prime::new(size)?),
            SpaceKind::Affine => VertexSpace::PuncturedAffinePlane(Prime::new(size)?),
            SpaceKind::Group => VertexSpace::FullGroup(Prime::new(size)?),
            SpaceKind::Perm => {
                let n = u32::try_from(size)
                    .ok()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| Error::OutOfRange(format!("permutation degree {size}")))?;
                VertexSpace::PermutationDomain(n)
            }
        })
    }

    pub fn kind(&self) -> SpaceKind {
        match self {
            VertexSpace::ProjectiveLine(_) => SpaceKind::Projective,
            VertexSpace::PuncturedAffinePlane(_) => SpaceKind::Affine,
            VertexSpace::FullGroup(_) => SpaceKind::Group,
            VertexSpace::PermutationDomain(_) => SpaceKind::Perm,
        }
    }

    /// `p` for the matrix spaces, `n` for the permutation domain.
    pub fn size_param(&self) -> u64 {
        match *self {
            VertexSpace::ProjectiveLine(p)
            | VertexSpace::PuncturedAffinePlane(p)
            | VertexSpace::FullGroup(p) => p.as_u64(),
            VertexSpace::PermutationDomain(n) => n as u64,
        }
    }

    pub fn modulus(&self) -> Option<Prime> {
        match *self {
            VertexSpace::ProjectiveLine(p)
            | VertexSpace::PuncturedAffinePlane(p)
            | VertexSpace::FullGroup(p) => Some(p),
            VertexSpace::PermutationDomain(_) => None,
        }
    }

    pub fn vertex_count(&self) -> u64 {
        match *self {
            VertexSpace::ProjectiveLine(p) => p.as_u64() + 1,
            VertexSpace::PuncturedAffinePlane(p) => p.as_u64() * p.as_u64() - 1,
            VertexSpace::FullGroup(p) => p.sl2_order(),
            VertexSpace::PermutationDomain(n) => n as u64,
        }
    }
}

impl fmt::Display for VertexSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind(), self.size_param())
    }
}

/// Affine vertex index of the nonzero column vector `(x, y)`.
#[inline]
pub fn affine_index(x: u32, y: u32, p: Prime) -> u64 {
    debug_assert!(x != 0 || y != 0);
    x as u64 * p.as_u64() + y as u64 - 1
}

#[inline]
pub fn affine_point(index: u64, p: Prime) -> (u32, u32) {
    let v = index + 1;
    ((v / p.as_u64()) as u32, (v % p.as_u64()) as u32)
}

/// Projective index of the point at infinity.
#[inline]
pub fn projective_infinity(p: Prime) -> u64 {
    p.as_u64()
}

/// A permutation of `{0, .., n-1}` given by its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let slot = seen
                .get_mut(x as usize)
                .ok_or_else(|| Error::InvalidPermutation(format!("image {x} >= {n}")))?;
            if *slot {
                return Err(Error::InvalidPermutation(format!("repeated image {x}")));
            }
            *slot = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: u32) -> Self {
        Permutation((0..n).collect())
    }

    pub fn degree(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, i: u32) -> u32 {
        self.0[i as usize]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::ModulusMismatch(
                self.degree() as u64,
                other.degree() as u64,
            ));
        }
        Ok(Permutation(
            other.0.iter().map(|&i| self.apply(i)).collect(),
        ))
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupElement {
    Sl2(Sl2Element),
    Perm(Permutation),
}

impl GroupElement {
    pub fn inverse(&self) -> Self {
        match self {
            GroupElement::Sl2(g) => GroupElement::Sl2(g.inv()),
            GroupElement::Perm(s) => GroupElement::Perm(s.inverse()),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::Sl2(g) => g.is_identity(),
            GroupElement::Perm(s) => s.is_identity(),
        }
    }

    pub fn as_sl2(&self) -> Option<&Sl2Element> {
        match self {
            GroupElement::Sl2(g) => Some(g),
            GroupElement::Perm(_) => None,
        }
    }

    fn equals_up_to_sign(&self, other: &Self) -> bool {
        match (self, other) {
            (GroupElement::Sl2(a), GroupElement::Sl2(b)) => a == b || *a == b.neg(),
            _ => self == other,
        }
    }
}

impl From<Sl2Element> for GroupElement {
    fn from(g: Sl2Element) -> Self {
        GroupElement::Sl2(g)
    }
}

impl From<Permutation> for GroupElement {
    fn from(s: Permutation) -> Self {
        GroupElement::Perm(s)
    }
}

/// Where a generator set came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Fixed,
    Lps,
    Random,
    Custom,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed" => Ok(Family::Fixed),
            "lps" => Ok(Family::Lps),
            "random" => Ok(Family::Random),
            "custom" => Ok(Family::Custom),
            other => Err(Error::Config(format!("unknown family '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Provenance {
    pub family: Family,
    pub seed: Option<u64>,
}

/// A multiset of group elements closed under inverses.
///
/// `inverse_of[i]` is the index of the formal inverse letter of element `i`
/// (possibly `i` itself). When `up_to_sign` is set, some pairs are inverse
/// only modulo `±I`; such sets act symmetrically on the projective line but
/// not on the affine plane or the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    provenance: Provenance,
    elements: Vec<GroupElement>,
    inverse_of: Vec<usize>,
    up_to_sign: bool,
}

impl GeneratorSet {
    /// Pairs every element with an inverse partner, preferring exact inverses
    /// at the lowest unused later index.
    pub fn from_elements(elements: Vec<GroupElement>, provenance: Provenance) -> Result<Self> {
        let n = elements.len();
        if let Some(first) = elements.first() {
            for e in &elements[1..] {
                match (first, e) {
                    (GroupElement::Sl2(a), GroupElement::Sl2(b)) if a.modulus() != b.modulus() => {
                        return Err(Error::ModulusMismatch(
                            a.modulus().as_u64(),
                            b.modulus().as_u64(),
                        ))
                    }
                    (GroupElement::Perm(a), GroupElement::Perm(b)) if a.degree() != b.degree() => {
                        return Err(Error::ModulusMismatch(a.degree() as u64, b.degree() as u64))
                    }
                    (GroupElement::Sl2(_), GroupElement::Perm(_))
                    | (GroupElement::Perm(_), GroupElement::Sl2(_)) => {
                        return Err(Error::IncompatibleSpace(
                            "mixed matrix and permutation generators".into(),
                        ))
                    }
                    _ => {}
                }
            }
        }
        let mut inverse_of = vec![usize::MAX; n];
        let mut up_to_sign = false;
        for i in 0..n {
            if inverse_of[i] != usize::MAX {
                continue;
            }
            let inv = elements[i].inverse();
            let free = |j: &usize| inverse_of[*j] == usize::MAX;
            let partner = if let Some(j) = (i + 1..n).filter(free).find(|&j| elements[j] == inv) {
                j
            } else if elements[i] == inv {
                i
            } else if let Some(j) = (i + 1..n)
                .filter(free)
                .find(|&j| elements[j].equals_up_to_sign(&inv))
            {
                up_to_sign = true;
                j
            } else if elements[i].equals_up_to_sign(&inv) {
                up_to_sign = true;
                i
            } else {
                return Err(Error::NotSymmetric);
            };
            inverse_of[i] = partner;
            inverse_of[partner] = i;
        }
        Ok(GeneratorSet {
            provenance,
            elements,
            inverse_of,
            up_to_sign,
        })
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse_of[i]
    }

    pub fn is_symmetric_up_to_sign_only(&self) -> bool {
        self.up_to_sign
    }

    pub fn contains_identity(&self) -> bool {
        self.elements.iter().any(GroupElement::is_identity)
    }

    /// Matrix generators, or `None` for a permutation set.
    pub fn matrices(&self) -> Option<Vec<Sl2Element>> {
        self.elements.iter().map(|e| e.as_sl2().copied()).collect()
    }

    pub fn modulus(&self) -> Option<Prime> {
        self.elements
            .first()
            .and_then(|e| e.as_sl2())
            .map(|g| g.modulus())
    }

    /// Checks that the set acts on `space` and is symmetric there.
    pub fn check_space(&self, space: &VertexSpace) -> Result<()> {
        for e in &self.elements {
            match (e, space) {
                (GroupElement::Sl2(g), _) if space.modulus() == Some(g.modulus()) => {}
                (GroupElement::Perm(s), VertexSpace::PermutationDomain(n)) if s.degree() == *n => {}
                _ => {
                    return Err(Error::IncompatibleSpace(format!(
                        "generators do not act on {space}"
                    )))
                }
            }
        }
        if self.up_to_sign && !matches!(space, VertexSpace::ProjectiveLine(_)) {
            return Err(Error::NotSymmetric);
        }
        Ok(())
    }
}

/// The fixed set `{[[1,±2],[0,1]], [[1,0],[±2,1]]}`.
pub fn fixed_generators(p: Prime) -> GeneratorSet {
    let m = |a, b, c, d| GroupElement::Sl2(Sl2Element::new(a, b, c, d, p).expect("unipotent"));
    GeneratorSet::from_elements(
        vec![m(1, 2, 0, 1), m(1, -2, 0, 1), m(1, 0, 2, 1), m(1, 0, -2, 1)],
        Provenance {
            family: Family::Fixed,
            seed: None,
        },
    )
    .expect("fixed set is symmetric")
}

/// The four LPS matrices attached to the prime 3,
/// `(1/√3)·[[i, ±1±i], [∓1±i, -i]]` with `i = √-1`.
///
/// Each matrix has trace zero, so its square is `-I`: the set is closed
/// under inverses only modulo `±I`, which is exact on the projective line.
pub fn lps_generators(p: Prime) -> Result<GeneratorSet> {
    if p.get() % 12 != 1 {
        return Err(Error::BadPrimeResidue(p.get()));
    }
    let i = FieldElement::new(-1, p).sqrt()?;
    let inv_sqrt3 = FieldElement::new(3, p).sqrt()?.inv()?;
    let gaussian =
        |re: i64, im: i64| FieldElement::new(re, p).add(i.mul(FieldElement::new(im, p))?);
    // upper-right and lower-left entries as (re, im) pairs
    let off_diagonal: [((i64, i64), (i64, i64)); 4] = [
        ((1, 1), (-1, 1)),
        ((-1, 1), (1, 1)),
        ((1, -1), (-1, -1)),
        ((-1, -1), (1, -1)),
    ];
    let mut elements = Vec::with_capacity(4);
    for ((br, bi), (cr, ci)) in off_diagonal {
        let entries = [i, gaussian(br, bi)?, gaussian(cr, ci)?, i.neg()];
        let [a, b, c, d] = entries.map(|x| x.mul(inv_sqrt3).expect("same modulus"));
        elements.push(GroupElement::Sl2(Sl2Element::from_fields(a, b, c, d)?));
    }
    GeneratorSet::from_elements(
        elements,
        Provenance {
            family: Family::Lps,
            seed: None,
        },
    )
}

/// `d` uniform independent elements of SL2(Z/pZ), each followed by its
/// inverse. Draws use the stream `(seed, p, 0)` and rejection sampling over
/// the dense group index.
pub fn random_generators(seed: u64, d: usize, p: Prime) -> GeneratorSet {
    random_generators_trial(seed, 0, d, p)
}

/// As [`random_generators`] on the stream `(seed, p, trial)`.
pub fn random_generators_trial(seed: u64, trial: u64, d: usize, p: Prime) -> GeneratorSet {
    let mut rng = StreamRng::new(seed, p.as_u64(), trial);
    let order = p.sl2_order();
    let mut elements = Vec::with_capacity(2 * d);
    for _ in 0..d {
        let g = Sl2Element::from_index(rng.below(order), p).expect("index in range");
        elements.push(GroupElement::Sl2(g));
        elements.push(GroupElement::Sl2(g.inv()));
    }
    GeneratorSet::from_elements(
        elements,
        Provenance {
            family: Family::Random,
            seed: Some(seed),
        },
    )
    .expect("pairs are inverse")
}

/// `d` uniform permutations of `{0..n-1}` (Fisher–Yates on the stream
/// `(seed, n, 0)`), each followed by its inverse.
pub fn random_permutations(seed: u64, d: usize, n: u32) -> GeneratorSet {
    let mut rng = StreamRng::new(seed, n as u64, 0);
    let mut elements = Vec::with_capacity(2 * d);
    for _ in 0..d {
        let mut images: Vec<u32> = (0..n).collect();
        for i in (1..n as usize).rev() {
            let j = rng.below(i as u64 + 1) as usize;
            images.swap(i, j);
        }
        let s = Permutation(images);
        elements.push(GroupElement::Perm(s.inverse()));
        elements.push(GroupElement::Perm(s));
        let len = elements.len();
        elements.swap(len - 2, len - 1);
    }
    GeneratorSet::from_elements(
        elements,
        Provenance {
            family: Family::Random,
            seed: Some(seed),
        },
    )
    .expect("pairs are inverse")
}

/// Image of `vertex` under `g` in `space`.
pub fn act(g: &GroupElement, vertex: u64, space: &VertexSpace) -> Result<u64> {
    let size = space.vertex_count();
    if vertex >= size {
        return Err(Error::InvalidVertex { vertex, size });
    }
    match (g, space) {
        (GroupElement::Sl2(m), VertexSpace::ProjectiveLine(p)) if m.modulus() == *p => {
            Ok(mobius(m, vertex))
        }
        (GroupElement::Sl2(m), VertexSpace::PuncturedAffinePlane(p)) if m.modulus() == *p => {
            Ok(linear(m, vertex))
        }
        (GroupElement::Sl2(m), VertexSpace::FullGroup(p)) if m.modulus() == *p => {
            Ok(left_mul(m, vertex))
        }
        (GroupElement::Perm(s), VertexSpace::PermutationDomain(n)) if s.degree() == *n => {
            Ok(s.apply(vertex as u32) as u64)
        }
        _ => Err(Error::IncompatibleSpace(format!(
            "element does not act on {space}"
        ))),
    }
}

/// Möbius action `z -> (az + b)/(cz + d)` on projective indices.
#[inline]
pub(crate) fn mobius(g: &Sl2Element, z: u64) -> u64 {
    let q = g.p.get();
    let [a, b, c, d] = g.m;
    if z == q as u64 {
        return if c == 0 {
            q as u64
        } else {
            mul_mod(a, inv_mod(c, q).expect("c != 0"), q) as u64
        };
    }
    let z = z as u32;
    let den = add_mod(mul_mod(c, z, q), d, q);
    if den == 0 {
        return q as u64;
    }
    let num = add_mod(mul_mod(a, z, q), b, q);
    mul_mod(num, inv_mod(den, q).expect("den != 0"), q) as u64
}

/// Linear action on column vectors, by affine index.
#[inline]
pub(crate) fn linear(g: &Sl2Element, v: u64) -> u64 {
    let p = g.p;
    let q = p.get();
    let (x, y) = affine_point(v, p);
    let [a, b, c, d] = g.m;
    let nx = add_mod(mul_mod(a, x, q), mul_mod(b, y, q), q);
    let ny = add_mod(mul_mod(c, x, q), mul_mod(d, y, q), q);
    affine_index(nx, ny, p)
}

#[inline]
pub(crate) fn left_mul(g: &Sl2Element, h: u64) -> u64 {
    g.mul_unchecked(&Sl2Element::from_index_unchecked(h, g.p))
        .index()
}

/// JSON form: `{p, kind, seed?, matrices: [[a,b,c,d], ..]}` for matrix sets,
/// `{n, kind, seed?, permutations: [[..], ..]}` for permutation sets.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorSetWire {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<u32>,
    kind: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrices: Option<Vec<[u32; 4]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    permutations: Option<Vec<Vec<u32>>>,
}

impl Serialize for GeneratorSet {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut wire = GeneratorSetWire {
            p: None,
            n: None,
            kind: self.provenance.family,
            seed: self.provenance.seed,
            matrices: None,
            permutations: None,
        };
        match self.elements.first() {
            Some(GroupElement::Perm(s)) => {
                wire.n = Some(s.degree());
                wire.permutations = Some(
                    self.elements
                        .iter()
                        .filter_map(|e| match e {
                            GroupElement::Perm(s) => Some(s.images().to_vec()),
                            GroupElement::Sl2(_) => None,
                        })
                        .collect(),
                );
            }
            _ => {
                wire.p = self.modulus().map(Prime::as_u64);
                wire.matrices = Some(
                    self.elements
                        .iter()
                        .filter_map(|e| e.as_sl2().map(Sl2Element::entries))
                        .collect(),
                );
            }
        }
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GeneratorSet {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = GeneratorSetWire::deserialize(deserializer)?;
        let provenance = Provenance {
            family: wire.kind,
            seed: wire.seed,
        };
        let elements = match (wire.matrices, wire.permutations) {
            (Some(ms), None) => {
                let p = wire
                    .p
                    .ok_or_else(|| D::Error::custom("matrix set without p"))?;
                let p = Prime::new(p).map_err(D::Error::custom)?;
                ms.into_iter()
                    .map(|[a, b, c, d]| {
                        if [a, b, c, d].iter().any(|&x| x >= p.get()) {
                            return Err(D::Error::custom("matrix entry not reduced mod p"));
                        }
                        Sl2Element::new(a as i64, b as i64, c as i64, d as i64, p)
                            .map(GroupElement::Sl2)
                            .map_err(D::Error::custom)
                    })
                    .collect::<std::result::Result<Vec<_>, _>>()?
            }
            (None, Some(ps)) => {
                let n = wire
                    .n
                    .ok_or_else(|| D::Error::custom("permutation set without n"))?;
                ps.into_iter()
                    .map(|images| {
                        if images.len() != n as usize {
                            return Err(D::Error::custom("permutation length differs from n"));
                        }
                        Permutation::new(images)
                            .map(GroupElement::Perm)
                            .map_err(D::Error::custom)
                    })
                    .collect::<std::result::Result<Vec<_>, _>>()?
            }
            _ => {
                return Err(D::Error::custom(
                    "expected exactly one of matrices or permutations",
                ))
            }
        };
        GeneratorSet::from_elements(elements, provenance).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    fn mat(a: i64, b: i64, c: i64, d: i64, p: u64) -> GroupElement {
        GroupElement::Sl2(Sl2Element::new(a, b, c, d, pr(p)).unwrap())
    }

    #[test]
    fn fixed_set_mod_5() {
        let s = fixed_generators(pr(5));
        let got: Vec<[u32; 4]> = s.matrices().unwrap().iter().map(|g| g.entries()).collect();
        assert_eq!(
            got,
            vec![[1, 2, 0, 1], [1, 3, 0, 1], [1, 0, 2, 1], [1, 0, 3, 1]]
        );
        for i in 0..4 {
            let j = s.inverse_index(i);
            assert_eq!(s.elements()[j], s.elements()[i].inverse());
        }
        assert!(!s.is_symmetric_up_to_sign_only());
    }

    #[test]
    fn lps_set_mod_13() {
        let p = pr(13);
        assert_eq!(FieldElement::new(-1, p).sqrt().unwrap().value(), 5);
        assert_eq!(FieldElement::new(3, p).sqrt().unwrap().value(), 4);
        let l = lps_generators(p).unwrap();
        assert_eq!(l.len(), 4);
        let mats = l.matrices().unwrap();
        let minus_id = Sl2Element::identity(p).neg();
        for (i, g) in mats.iter().enumerate() {
            // determinant checked by the constructor; trace zero gives g^2 = -I
            let [a, _, _, d] = g.entries();
            assert_eq!((a + d) % 13, 0);
            assert_eq!(g.mul(g).unwrap(), minus_id);
            assert_eq!(g.inv(), g.neg());
            assert_eq!(l.inverse_index(i), i);
        }
        // no two distinct members multiply to the identity in SL2
        for a in &mats {
            for b in &mats {
                assert!(!a.mul(b).unwrap().is_identity());
            }
        }
        assert!(l.is_symmetric_up_to_sign_only());
        assert!(matches!(
            lps_generators(pr(11)),
            Err(Error::BadPrimeResidue(11))
        ));
        assert!(l.check_space(&VertexSpace::ProjectiveLine(p)).is_ok());
        assert!(matches!(
            l.check_space(&VertexSpace::FullGroup(p)),
            Err(Error::NotSymmetric)
        ));
    }

    #[test]
    fn random_sets_are_deterministic_and_symmetric() {
        let p = pr(101);
        let a = random_generators(42, 3, p);
        let b = random_generators(42, 3, p);
        assert_eq!(a, b);
        assert_ne!(a, random_generators(43, 3, p));
        assert_eq!(a.len(), 6);
        for i in 0..6 {
            assert_eq!(a.elements()[a.inverse_index(i)], a.elements()[i].inverse());
        }
    }

    #[test]
    fn random_draws_are_uniform_over_sl2_5() {
        let p = pr(5);
        let draws = 10_000u64;
        let mut counts = vec![0u64; 120];
        for seed in 0..draws {
            let s = random_generators(seed, 1, p);
            counts[s.matrices().unwrap()[0].index() as usize] += 1;
        }
        let expected = draws as f64 / 120.0;
        let sigma = (draws as f64 * (1.0 / 120.0) * (119.0 / 120.0)).sqrt();
        for &c in &counts {
            assert!((c as f64 - expected).abs() <= 5.0 * sigma, "count {c}");
        }
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // chi-square with 119 degrees of freedom: mean 119, sd ~15.4
        assert!(chi2 < 119.0 + 5.0 * (2.0f64 * 119.0).sqrt(), "chi2 {chi2}");
    }

    #[test]
    fn action_examples() {
        let p = pr(5);
        let space = VertexSpace::ProjectiveLine(p);
        assert_eq!(act(&mat(1, 2, 0, 1, 5), 0, &space).unwrap(), 2);
        assert_eq!(
            act(&mat(0, 1, 4, 0, 5), projective_infinity(p), &space).unwrap(),
            0
        );
        // z = -d/c goes to infinity
        assert_eq!(act(&mat(0, 1, 4, 0, 5), 0, &space).unwrap(), 5);
        assert!(matches!(
            act(&mat(1, 2, 0, 1, 5), 6, &space),
            Err(Error::InvalidVertex { .. })
        ));
        let id = GroupElement::Sl2(Sl2Element::identity(p));
        for space in [
            VertexSpace::ProjectiveLine(p),
            VertexSpace::PuncturedAffinePlane(p),
            VertexSpace::FullGroup(p),
        ] {
            for v in 0..space.vertex_count() {
                assert_eq!(act(&id, v, &space).unwrap(), v);
            }
        }
    }

    #[test]
    fn affine_index_bijection() {
        for p in [3u64, 5, 7, 11, 13] {
            let prime = pr(p);
            let mut seen = vec![false; (p * p - 1) as usize];
            for x in 0..p as u32 {
                for y in 0..p as u32 {
                    if x == 0 && y == 0 {
                        continue;
                    }
                    let i = affine_index(x, y, prime);
                    assert!(!seen[i as usize]);
                    seen[i as usize] = true;
                    assert_eq!(affine_point(i, prime), (x, y));
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn lps_orbit_covers_projective_line_13() {
        let p = pr(13);
        let l = lps_generators(p).unwrap();
        let space = VertexSpace::ProjectiveLine(p);
        let mut reached = vec![false; 14];
        let mut frontier = vec![0u64];
        reached[0] = true;
        while let Some(v) = frontier.pop() {
            for g in l.elements() {
                let w = act(g, v, &space).unwrap();
                if !reached[w as usize] {
                    reached[w as usize] = true;
                    frontier.push(w);
                }
            }
        }
        assert!(reached.iter().all(|&r| r));
    }

    #[test]
    fn permutation_basics() {
        let s = Permutation::new(vec![1, 2, 0]).unwrap();
        assert_eq!(s.compose(&s.inverse()).unwrap(), Permutation::identity(3));
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![2, 0]).is_err());
        let set = random_permutations(9, 2, 50);
        assert_eq!(set.len(), 4);
        for i in 0..4 {
            assert_eq!(
                set.elements()[set.inverse_index(i)],
                set.elements()[i].inverse()
            );
        }
        assert!(matches!(
            GeneratorSet::from_elements(
                vec![GroupElement::Perm(s)],
                Provenance {
                    family: Family::Custom,
                    seed: None
                }
            ),
            Err(Error::NotSymmetric)
        ));
    }

    #[test]
    fn generator_set_json_is_canonical() {
        let s = fixed_generators(pr(5));
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(
            json,
            r#"{"p":5,"kind":"fixed","matrices":[[1,2,0,1],[1,3,0,1],[1,0,2,1],[1,0,3,1]]}"#
        );
        let back: GeneratorSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        let r = random_generators(17, 2, pr(101));
        let back: GeneratorSet = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        let l = lps_generators(pr(13)).unwrap();
        let back: GeneratorSet = serde_json::from_str(&serde_json::to_string(&l).unwrap()).unwrap();
        assert_eq!(back, l);
        let perms = random_permutations(3, 2, 10);
        let back: GeneratorSet =
            serde_json::from_str(&serde_json::to_string(&perms).unwrap()).unwrap();
        assert_eq!(back, perms);
        assert!(serde_json::from_str::<GeneratorSet>(
            r#"{"p":5,"kind":"fixed","matrices":[[1,2,0,1]]}"#
        )
        .is_err());
        assert!(serde_json::from_str::<GeneratorSet>(
            r#"{"p":5,"kind":"fixed","matrices":[],"extra":1}"#
        )
        .is_err());
    }

    fn spaces(p: Prime) -> [VertexSpace; 3] {
        [
            VertexSpace::ProjectiveLine(p),
            VertexSpace::PuncturedAffinePlane(p),
            VertexSpace::FullGroup(p),
        ]
    }

    proptest! {
        #[test]
        fn action_is_a_group_action(
            gi in 0u64..(101 * 101 * 101 - 101),
            hi in 0u64..(101 * 101 * 101 - 101),
            v in 0u64..1_000_000,
        ) {
            let p = pr(101);
            let g = Sl2Element::from_index(gi, p).unwrap();
            let h = Sl2Element::from_index(hi, p).unwrap();
            let gh = GroupElement::Sl2(g.mul(&h).unwrap());
            let (g, h) = (GroupElement::Sl2(g), GroupElement::Sl2(h));
            for space in spaces(p) {
                let v = v % space.vertex_count();
                let lhs = act(&gh, v, &space).unwrap();
                let rhs = act(&g, act(&h, v, &space).unwrap(), &space).unwrap();
                prop_assert_eq!(lhs, rhs);
                let back = act(&g.inverse(), act(&g, v, &space).unwrap(), &space).unwrap();
                prop_assert_eq!(back, v);
            }
        }

        #[test]
        fn permutation_action_is_a_group_action(seed in 0u64..10_000, v in 0u32..40) {
            let set = random_permutations(seed, 2, 40);
            let space = VertexSpace::PermutationDomain(40);
            let (g, h) = match (&set.elements()[0], &set.elements()[2]) {
                (GroupElement::Perm(a), GroupElement::Perm(b)) => (a.clone(), b.clone()),
                _ => unreachable!(),
            };
            let gh = GroupElement::Perm(g.compose(&h).unwrap());
            let lhs = act(&gh, v as u64, &space).unwrap();
            let rhs = act(&GroupElement::Perm(g), act(&GroupElement::Perm(h), v as u64, &space).unwrap(), &space).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
