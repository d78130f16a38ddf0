//! Small finite fields `GF(p^k)` and Singer perfect difference sets.
//!
//! Elements are polynomials over `Z_p` of degree `< k`, reduced modulo a
//! monic irreducible polynomial. Everything here is sized for exhaustive
//! checking: fields hold at most [`DEFAULT_LIMIT`] elements.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::FieldError;

/// Largest field size accepted by [`FiniteField::new`].
pub const DEFAULT_LIMIT: u32 = 4096;

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `(p, k)` with `q = p^k`, if `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// Little-endian coefficient vector of length `k`, entries in `[0, p)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FieldElement {
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (deg, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match (deg, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("x")?,
                (1, c) => write!(f, "{c}x")?,
                (d, 1) => write!(f, "x^{d}")?,
                (d, c) => write!(f, "{c}x^{d}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteField {
    p: u32,
    k: u32,
    /// Monic, little-endian, length `k + 1`.
    modulus: Vec<u32>,
}

impl FiniteField {
    /// `GF(p^k)` with the smallest irreducible monic modulus, where monic
    /// polynomials of degree `k` are ordered by the integer whose base-`p`
    /// digits are their lower coefficients (constant term least significant).
    pub fn new(p: u32, k: u32) -> Result<Self, FieldError> {
        Self::with_limit(p, k, DEFAULT_LIMIT)
    }

    pub fn with_limit(p: u32, k: u32, limit: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let size = (p as u64).checked_pow(k).filter(|&s| s <= u64::from(limit));
        let Some(size) = size else {
            return Err(FieldError::TooLarge { p, k, limit });
        };
        for code in 0..size as u32 {
            let mut modulus = digits(code, p, k as usize);
            modulus.push(1);
            if is_irreducible(&modulus, p) {
                return Ok(FiniteField { p, k, modulus });
            }
        }
        // An irreducible polynomial of every degree exists over every prime field.
        unreachable!("no irreducible polynomial of degree {k} over Z_{p}")
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> u32 {
        self.p.pow(self.k)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coeffs: vec![0; self.k as usize] }
    }

    pub fn one(&self) -> FieldElement {
        self.constant(1)
    }

    pub fn constant(&self, c: u32) -> FieldElement {
        let mut coeffs = vec![0; self.k as usize];
        coeffs[0] = c % self.p;
        FieldElement { coeffs }
    }

    /// The class of `x`; equals [`FiniteField::constant`] when `k = 1`.
    pub fn generator_x(&self) -> FieldElement {
        if self.k == 1 {
            // x ≡ -modulus[0] in Z_p
            return self.constant((self.p - self.modulus[0]) % self.p);
        }
        let mut coeffs = vec![0; self.k as usize];
        coeffs[1] = 1;
        FieldElement { coeffs }
    }

    pub fn element(&self, coeffs: Vec<u32>) -> Result<FieldElement, FieldError> {
        if coeffs.len() != self.k as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(FieldError::ForeignElement);
        }
        Ok(FieldElement { coeffs })
    }

    /// Element whose coefficients are the base-`p` digits of `code`.
    pub fn decode(&self, code: u32) -> FieldElement {
        FieldElement { coeffs: digits(code, self.p, self.k as usize) }
    }

    pub fn encode(&self, a: &FieldElement) -> u32 {
        a.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x + y) % self.p).collect() }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement { coeffs: a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect() }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let k = self.k as usize;
        let p = u64::from(self.p);
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u64::from(x) * u64::from(y)) % p;
            }
        }
        // Reduce the high coefficients using x^k = -(lower part of modulus).
        for deg in (k..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                let idx = deg - k + i;
                prod[idx] = (prod[idx] + (p - c) * u64::from(m)) % p;
            }
        }
        FieldElement { coeffs: prod[..k].iter().map(|&c| c as u32).collect() }
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order: the least `e >= 1` with `a^e = 1`.
    pub fn order(&self, a: &FieldElement) -> Result<u32, FieldError> {
        if a.coeffs.len() != self.k as usize {
            return Err(FieldError::ForeignElement);
        }
        if a.coeffs.iter().all(|&c| c == 0) {
            return Err(FieldError::ZeroHasNoOrder);
        }
        let group = self.size() - 1;
        let one = self.one();
        let order = (1..=group)
            .filter(|d| group.is_multiple_of(*d))
            .find(|&d| self.pow(a, u64::from(d)) == one)
            .unwrap_or(group);
        Ok(order)
    }

    /// The generator of the multiplicative group with the smallest code.
    pub fn primitive_element(&self) -> FieldElement {
        let group = self.size() - 1;
        (1..self.size())
            .map(|c| self.decode(c))
            .find(|a| self.order(a) == Ok(group))
            .expect("multiplicative group of a finite field is cyclic")
    }
}

fn digits(mut code: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(code % p);
        code /= p;
    }
    out
}

/// Remainder of `num` modulo the monic `den` over `Z_p` (both little-endian).
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = num.iter().map(|&c| u64::from(c)).collect();
    let dd = den.len() - 1;
    let p = u64::from(p);
    while r.len() > dd {
        let c = r.pop().unwrap_or(0);
        if c == 0 {
            continue;
        }
        let base = r.len() - dd;
        for (i, &m) in den[..dd].iter().enumerate() {
            r[base + i] = (r[base + i] + (p - c) * u64::from(m)) % p;
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d as u32) {
            let mut divisor = digits(code, p, d);
            divisor.push(1);
            if poly_rem(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// `q + 1` residues modulo `q² + q + 1` whose nonzero differences hit every
/// nonzero residue exactly once.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DifferenceSet {
    pub q: u32,
    pub modulus: u32,
    /// Sorted; the smallest translate containing 0.
    pub residues: Vec<u32>,
}

/// True iff the differences of `set` modulo `modulus` cover every nonzero
/// residue exactly once.
pub fn is_perfect_difference_set(set: &[u32], modulus: u32) -> bool {
    if modulus == 0 {
        return false;
    }
    let mut hits = vec![0u32; modulus as usize];
    for &a in set {
        for &b in set {
            if a != b {
                hits[((a + modulus - b) % modulus) as usize] += 1;
            }
        }
    }
    hits[0] == 0 && hits[1..].iter().all(|&h| h == 1)
}

/// Singer's construction: `θ` generates `GF(q³)*`, and the exponents `i`
/// (taken modulo `q²+q+1`) with `θ^i` in the `GF(q)`-span of `{1, θ}` form the
/// difference set. `GF(q³)` is built directly as `GF(p^{3k})`; its subfield
/// `GF(q)` is `{0} ∪ ⟨θ^{q²+q+1}⟩`.
pub fn singer_difference_set(q: u32) -> Result<DifferenceSet, FieldError> {
    let (p, k) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
    let field = FiniteField::new(p, 3 * k)?;
    let theta = field.primitive_element();
    let size = field.size();
    let modulus = q * q + q + 1;

    // powers[i] = code of θ^i
    let mut powers = Vec::with_capacity((size - 1) as usize);
    let mut cur = field.one();
    for _ in 0..size - 1 {
        powers.push(field.encode(&cur));
        cur = field.mul(&cur, &theta);
    }
    let mut subfield = vec![field.zero()];
    subfield.extend((0..q - 1).map(|j| field.decode(powers[(j * modulus) as usize])));

    let mut in_plane = vec![false; size as usize];
    for c0 in &subfield {
        for c1 in &subfield {
            let v = field.add(c0, &field.mul(c1, &theta));
            in_plane[field.encode(&v) as usize] = true;
        }
    }
    let set: Vec<u32> = (0..modulus).filter(|&i| in_plane[powers[i as usize] as usize]).collect();
    if set.len() != q as usize + 1 || !is_perfect_difference_set(&set, modulus) {
        return Err(FieldError::VerificationFailed { q });
    }
    Ok(DifferenceSet { q, modulus, residues: canonical_translate(&set, modulus) })
}

fn translates(set: &[u32], modulus: u32) -> impl Iterator<Item = Vec<u32>> + '_ {
    set.iter().map(move |&d| {
        let mut t: Vec<u32> = set.iter().map(|&x| (x + modulus - d) % modulus).collect();
        t.sort_unstable();
        t
    })
}

/// The lexicographically smallest sorted translate of `set` that contains 0.
pub fn canonical_translate(set: &[u32], modulus: u32) -> Vec<u32> {
    translates(set, modulus).min().unwrap_or_default()
}

/// The translate containing 0 with the smallest maximum (ties: lexicographic).
pub fn shortest_translate(set: &[u32], modulus: u32) -> Vec<u32> {
    translates(set, modulus)
        .min_by(|a, b| a.last().cmp(&b.last()).then_with(|| a.cmp(b)))
        .unwrap_or_default()
}
