//! Exact arithmetic in GF(p) and SL2(Z/pZ).
//!
//! Every element carries its modulus; combining elements over different
//! primes is an error. Moduli are odd primes below 2^31 so that products fit
//! comfortably in 64-bit intermediates.

use std::fmt;

use crate::error::{Error, Result};

const MAX_MODULUS: u64 = 1 << 31;

/// An odd prime below 2^31, checked at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p >= MAX_MODULUS || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_u64(self) -> u64 {
        self.0 as u64
    }

    /// `|SL2(Z/pZ)| = p^3 - p`.
    pub fn sl2_order(self) -> u64 {
        let p = self.as_u64();
        p * p * p - p
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Deterministic primality by trial division (inputs are below 2^31).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
pub(crate) fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + b as u64;
    (if s >= p as u64 { s - p as u64 } else { s }) as u32
}

#[inline]
pub(crate) fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        (a as u64 + p as u64 - b as u64) as u32
    }
}

pub(crate) fn pow_mod(mut base: u32, mut exp: u64, p: u32) -> u32 {
    let mut acc = 1u32 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse by the extended Euclidean algorithm; `a` must be nonzero mod `p`.
#[inline]
pub(crate) fn inv_mod(a: u32, p: u32) -> Option<u32> {
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    if r1 == 0 {
        return None;
    }
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    Some(t0.rem_euclid(p as i64) as u32)
}

#[inline]
pub(crate) fn reduce(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

/// Element of GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    p: Prime,
}

impl FieldElement {
    pub fn new(value: i64, p: Prime) -> Self {
        FieldElement {
            value: reduce(value, p.get()),
            p,
        }
    }

    pub fn zero(p: Prime) -> Self {
        FieldElement { value: 0, p }
    }

    pub fn one(p: Prime) -> Self {
        FieldElement { value: 1, p }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Prime {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn check(self, other: Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p.as_u64(), other.p.as_u64()));
        }
        Ok(())
    }

    pub fn add(self, other: Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with(add_mod(self.value, other.value, self.p.get())))
    }

    pub fn sub(self, other: Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with(sub_mod(self.value, other.value, self.p.get())))
    }

    pub fn mul(self, other: Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with(mul_mod(self.value, other.value, self.p.get())))
    }

    pub fn neg(self) -> Self {
        self.with(sub_mod(0, self.value, self.p.get()))
    }

    pub fn pow(self, exp: u64) -> Self {
        self.with(pow_mod(self.value, exp, self.p.get()))
    }

    pub fn inv(self) -> Result<Self> {
        field_inv(self)
    }

    pub fn sqrt(self) -> Result<Self> {
        sqrt_mod(self)
    }

    /// Legendre symbol: 1, -1 (as p - 1), or 0.
    pub fn legendre(self) -> i32 {
        if self.value == 0 {
            return 0;
        }
        let p = self.p.get();
        if pow_mod(self.value, (p as u64 - 1) / 2, p) == 1 {
            1
        } else {
            -1
        }
    }

    fn with(self, value: u32) -> Self {
        FieldElement { value, p: self.p }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

pub fn field_inv(x: FieldElement) -> Result<FieldElement> {
    inv_mod(x.value, x.p.get())
        .map(|v| x.with(v))
        .ok_or(Error::ZeroInverse)
}

/// Square root by Tonelli–Shanks. Of the two roots `r` and `p - r` the
/// smaller one is returned.
pub fn sqrt_mod(x: FieldElement) -> Result<FieldElement> {
    let p = x.p.get();
    let n = x.value;
    if n == 0 {
        return Ok(x);
    }
    if x.legendre() != 1 {
        return Err(Error::NoRoot { value: n, p });
    }
    let root = if p % 4 == 3 {
        pow_mod(n, (p as u64 + 1) / 4, p)
    } else {
        // p - 1 = q * 2^s with q odd
        let mut q = p as u64 - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let mut z = 2u32;
        while FieldElement::new(z as i64, x.p).legendre() != -1 {
            z += 1;
        }
        let mut m = s;
        let mut c = pow_mod(z, q, p);
        let mut t = pow_mod(n, q, p);
        let mut r = pow_mod(n, (q + 1) / 2, p);
        while t != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod(t2, t2, p);
                i += 1;
            }
            let b = pow_mod(c, 1u64 << (m - i - 1), p);
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
        r
    };
    Ok(x.with(root.min(p - root)))
}

/// Smallest generator of GF(p)^*.
pub fn primitive_root(p: Prime) -> FieldElement {
    let pm1 = p.as_u64() - 1;
    let factors = prime_factors(pm1);
    (2..p.get())
        .find(|&g| factors.iter().all(|&q| pow_mod(g, pm1 / q, p.get()) != 1))
        .map(|g| FieldElement::new(g as i64, p))
        // p = 3: the only candidate is 2, found above; this branch is unreachable for odd primes
        .unwrap_or_else(|| FieldElement::one(p))
}

/// Discrete logarithm table for a primitive root.
#[derive(Clone, Debug)]
pub struct DlogTable {
    base: FieldElement,
    table: Vec<u32>,
}

impl DlogTable {
    pub fn new(p: Prime) -> Self {
        let base = primitive_root(p);
        let n = p.get() as usize;
        let mut table = vec![u32::MAX; n];
        let mut x = 1u32;
        for e in 0..(n - 1) as u32 {
            table[x as usize] = e;
            x = mul_mod(x, base.value, p.get());
        }
        DlogTable { base, table }
    }

    pub fn base(&self) -> FieldElement {
        self.base
    }

    pub fn modulus(&self) -> Prime {
        self.base.p
    }

    /// Exponent `e` with `base^e = v`; `None` for zero.
    #[inline]
    pub fn log(&self, v: u32) -> Option<u32> {
        match self.table.get(v as usize) {
            Some(&e) if e != u32::MAX => Some(e),
            _ => None,
        }
    }
}

/// Element of SL2(Z/pZ), stored row-major as canonical residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Sl2Element {
    pub(crate) m: [u32; 4],
    pub(crate) p: Prime,
}

impl Sl2Element {
    pub fn new(a: i64, b: i64, c: i64, d: i64, p: Prime) -> Result<Self> {
        let q = p.get();
        let m = [reduce(a, q), reduce(b, q), reduce(c, q), reduce(d, q)];
        let det = sub_mod(mul_mod(m[0], m[3], q), mul_mod(m[1], m[2], q), q);
        if det != 1 {
            return Err(Error::NotUnimodular { det, p: q });
        }
        Ok(Sl2Element { m, p })
    }

    pub fn from_fields(
        a: FieldElement,
        b: FieldElement,
        c: FieldElement,
        d: FieldElement,
    ) -> Result<Self> {
        for e in [b, c, d] {
            a.check(e)?;
        }
        Self::new(
            a.value as i64,
            b.value as i64,
            c.value as i64,
            d.value as i64,
            a.p,
        )
    }

    pub fn identity(p: Prime) -> Self {
        Sl2Element { m: [1, 0, 0, 1], p }
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    /// Entries `[a, b, c, d]` as residues in `[0, p)`.
    pub fn entries(&self) -> [u32; 4] {
        self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> FieldElement {
        FieldElement {
            value: self.m[2 * row + col],
            p: self.p,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.m == [1, 0, 0, 1]
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p.as_u64(), other.p.as_u64()));
        }
        Ok(self.mul_unchecked(other))
    }

    #[inline]
    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let q = self.p.get() as u64;
        let [a, b, c, d] = self.m.map(u64::from);
        let [e, f, g, h] = other.m.map(u64::from);
        Sl2Element {
            m: [
                ((a * e + b * g) % q) as u32,
                ((a * f + b * h) % q) as u32,
                ((c * e + d * g) % q) as u32,
                ((c * f + d * h) % q) as u32,
            ],
            p: self.p,
        }
    }

    pub fn inv(&self) -> Self {
        let q = self.p.get();
        let [a, b, c, d] = self.m;
        Sl2Element {
            m: [d, sub_mod(0, b, q), sub_mod(0, c, q), a],
            p: self.p,
        }
    }

    pub fn neg(&self) -> Self {
        let q = self.p.get();
        Sl2Element {
            m: self.m.map(|x| sub_mod(0, x, q)),
            p: self.p,
        }
    }

    /// Dense index in `[0, p^3 - p)`.
    ///
    /// The first column `(a, c)` selects a block through the affine vertex
    /// index `a*p + c - 1`; within the block the free entry is `b` when
    /// `a != 0` and `d` otherwise.
    #[inline]
    pub fn index(&self) -> u64 {
        let q = self.p.as_u64();
        let [a, b, c, d] = self.m.map(u64::from);
        let column = a * q + c - 1;
        column * q + if a != 0 { b } else { d }
    }

    pub fn from_index(index: u64, p: Prime) -> Result<Self> {
        let size = p.sl2_order();
        if index >= size {
            return Err(Error::IndexOutOfRange { index, size });
        }
        Ok(Self::from_index_unchecked(index, p))
    }

    #[inline]
    pub(crate) fn from_index_unchecked(index: u64, p: Prime) -> Self {
        let q = p.get();
        let q64 = q as u64;
        let column = index / q64 + 1;
        let t = (index % q64) as u32;
        let a = (column / q64) as u32;
        let c = (column % q64) as u32;
        let m = if a != 0 {
            // d = (1 + b c) / a
            let num = add_mod(1, mul_mod(t, c, q), q);
            [a, t, c, mul_mod(num, inv_mod(a, q).expect("a != 0"), q)]
        } else {
            // -b c = 1
            let b = sub_mod(0, inv_mod(c, q).expect("c != 0"), q);
            [0, b, c, t]
        };
        Sl2Element { m, p }
    }
}

impl fmt::Display for Sl2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.m;
        write!(f, "[[{a},{b}],[{c},{d}]] mod {}", self.p)
    }
}
