//! Arithmetic in `F_q` (prime `q`) and in `F_{q^m} = F_q[x] / (f)`.
//!
//! Elements of the extension are stored as coordinate vectors over the
//! polynomial basis `1, x, ..., x^{m-1}`, least-degree-first. Every element
//! carries a fingerprint of its context so that mixing elements from
//! different fields is detectable through the checked operations.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 32;

/// Largest supported base field order (coordinates are stored as `u8`).
pub const MAX_CHARACTERISTIC: u32 = 251;

/// An element of `F_{q^m}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement {
    tag: u32,
    m: u8,
    coords: [u8; MAX_DEGREE],
}

impl FieldElement {
    /// Coordinates over the polynomial basis, least-degree-first.
    #[inline]
    pub fn coords(&self) -> &[u8] {
        &self.coords[..self.m as usize]
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// True when the element lies in the prime subfield `F_q`.
    pub fn is_prime_field(&self) -> bool {
        self.coords[1..].iter().all(|&c| c == 0)
    }

    #[inline]
    pub(crate) fn raw(&self) -> &[u8; MAX_DEGREE] {
        &self.coords
    }

    #[inline]
    pub(crate) fn raw_mut(&mut self) -> &mut [u8; MAX_DEGREE] {
        &mut self.coords
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// The tower `F_q ⊂ F_{q^m}` with a fixed irreducible modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldContext {
    q: u8,
    m: usize,
    modulus: Vec<u8>,
    /// `-f_t mod q` for `t < m`, i.e. `x^m ≡ Σ reduction[t] x^t`.
    reduction: [u8; MAX_DEGREE],
    prime_inv: Vec<u8>,
    tag: u32,
}

impl FieldContext {
    /// Builds `F_{q^m}` over the given monic modulus (coefficients
    /// least-degree-first, length `m + 1`). Irreducibility is verified.
    pub fn new(q: u32, m: usize, modulus: &[u8]) -> Result<Self> {
        if !(2..=MAX_CHARACTERISTIC).contains(&q) || !is_prime(q) {
            return Err(Error::InvalidCharacteristic(q));
        }
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::InvalidDegree(m));
        }
        if modulus.len() != m + 1 || modulus[m] != 1 || modulus.iter().any(|&c| u32::from(c) >= q) {
            return Err(Error::InvalidModulus);
        }
        let q8 = q as u8;
        if !poly::is_irreducible(modulus, q8) {
            return Err(Error::ReducibleModulus);
        }
        let mut reduction = [0u8; MAX_DEGREE];
        for t in 0..m {
            reduction[t] = ((q - u32::from(modulus[t])) % q) as u8;
        }
        let mut prime_inv = vec![0u8; q as usize];
        for a in 1..q {
            prime_inv[a as usize] = pow_mod(a, q - 2, q) as u8;
        }
        Ok(FieldContext {
            q: q8,
            m,
            modulus: modulus.to_vec(),
            reduction,
            prime_inv,
            tag: fingerprint(q8, modulus),
        })
    }

    /// Builds `F_{q^m}` using the built-in modulus for `(q, m)`.
    pub fn with_default_modulus(q: u32, m: usize) -> Result<Self> {
        if !(2..=MAX_CHARACTERISTIC).contains(&q) || !is_prime(q) {
            return Err(Error::InvalidCharacteristic(q));
        }
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::InvalidDegree(m));
        }
        let modulus = default_modulus(q as u8, m);
        Self::new(q, m, &modulus)
    }

    #[inline]
    pub fn q(&self) -> u32 {
        u32::from(self.q)
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    /// Monic modulus, least-degree-first, length `m + 1`.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    /// `q^m`, saturating at `u128::MAX`.
    pub fn order(&self) -> u128 {
        checked_pow(self.q(), self.m as u32).unwrap_or(u128::MAX)
    }

    /// Fails with [`Error::ContextMismatch`] unless `a` was made by this context.
    #[inline]
    pub fn check(&self, a: &FieldElement) -> Result<()> {
        if a.tag == self.tag && a.m as usize == self.m {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        FieldElement { tag: self.tag, m: self.m as u8, coords: [0; MAX_DEGREE] }
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        self.from_prime(1)
    }

    /// Embeds `c mod q` into `F_{q^m}`.
    #[inline]
    pub fn from_prime(&self, c: u32) -> FieldElement {
        let mut e = self.zero();
        e.coords[0] = (c % self.q()) as u8;
        e
    }

    /// `x^i` for `i < m`.
    pub fn monomial(&self, i: usize) -> Result<FieldElement> {
        if i >= self.m {
            return Err(Error::InvalidCoordinates);
        }
        let mut e = self.zero();
        e.coords[i] = 1;
        Ok(e)
    }

    /// Element with the given coordinates (length `m`, entries in `[0, q)`).
    pub fn element(&self, coords: &[u8]) -> Result<FieldElement> {
        if coords.len() != self.m || coords.iter().any(|&c| c >= self.q) {
            return Err(Error::InvalidCoordinates);
        }
        let mut e = self.zero();
        e.coords[..self.m].copy_from_slice(coords);
        Ok(e)
    }

    #[inline]
    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        debug_assert!(self.check(a).is_ok() && self.check(b).is_ok());
        let mut out = *a;
        let q = u16::from(self.q);
        for (o, &y) in out.coords[..self.m].iter_mut().zip(&b.coords[..self.m]) {
            let s = u16::from(*o) + u16::from(y);
            *o = if s >= q { (s - q) as u8 } else { s as u8 };
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let mut out = *a;
        for c in out.coords[..self.m].iter_mut() {
            if *c != 0 {
                *c = self.q - *c;
            }
        }
        out
    }

    /// Multiplication by a prime-field scalar `c ∈ F_q`.
    #[inline]
    pub fn scale_prime(&self, c: u8, a: &FieldElement) -> FieldElement {
        let mut out = *a;
        let q = u16::from(self.q);
        for x in out.coords[..self.m].iter_mut() {
            *x = ((u16::from(*x) * u16::from(c)) % q) as u8;
        }
        out
    }

    /// Polynomial product reduced modulo the context modulus.
    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        debug_assert!(self.check(a).is_ok() && self.check(b).is_ok());
        let m = self.m;
        let q = u32::from(self.q);
        let mut acc = [0u32; 2 * MAX_DEGREE];
        for i in 0..m {
            let ai = u32::from(a.coords[i]);
            if ai == 0 {
                continue;
            }
            for j in 0..m {
                acc[i + j] += ai * u32::from(b.coords[j]);
            }
        }
        for d in (m..2 * m - 1).rev() {
            let c = acc[d] % q;
            if c == 0 {
                continue;
            }
            let base = d - m;
            for t in 0..m {
                acc[base + t] += c * u32::from(self.reduction[t]);
            }
        }
        let mut out = self.zero();
        for t in 0..m {
            out.coords[t] = (acc[t] % q) as u8;
        }
        out
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = poly::trim(a.coords().to_vec());
        let inv = poly::inverse_mod(&p, &self.modulus, self.q, &self.prime_inv);
        let mut out = self.zero();
        out.coords[..inv.len()].copy_from_slice(&inv);
        Ok(out)
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &FieldElement, mut e: u128) -> FieldElement {
        let mut base = *a;
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

    pub fn try_add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn try_sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.sub(a, b))
    }

    pub fn try_mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn try_inv(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.inv(a)
    }

    /// Uniform element of `F_{q^m}`.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let mut e = self.zero();
        for c in e.coords[..self.m].iter_mut() {
            *c = rng.gen_range(0..self.q);
        }
        e
    }

    /// Uniform element of `F_{q^m} \ {0}` by rejection.
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let e = self.random_element(rng);
            if !e.is_zero() {
                return e;
            }
        }
    }

    /// Inverse in the prime field; `c` must be nonzero mod q.
    #[inline]
    pub fn prime_inv(&self, c: u8) -> u8 {
        self.prime_inv[c as usize]
    }

    pub(crate) fn prime_inv_table(&self) -> &[u8] {
        &self.prime_inv
    }

    /// Every element of `F_{q^m}` in coordinate-counter order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let total = self.order();
        let mut cur = self.zero();
        let mut emitted: u128 = 0;
        core::iter::from_fn(move || {
            if emitted >= total {
                return None;
            }
            let out = cur;
            emitted += 1;
            for c in cur.coords[..self.m].iter_mut() {
                *c += 1;
                if *c < self.q {
                    break;
                }
                *c = 0;
            }
            Some(out)
        })
    }
}

fn fingerprint(q: u8, modulus: &[u8]) -> u32 {
    // FNV-1a
    let mut h: u32 = 0x811c_9dc5;
    for &b in core::iter::once(&q).chain(modulus) {
        h ^= u32::from(b);
        h = h.wrapping_mul(0x0100_0193);
    }
    h
}

pub(crate) fn checked_pow(base: u32, exp: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(u128::from(base))?;
    }
    Some(acc)
}

fn is_prime(q: u32) -> bool {
    q >= 2 && (2..q).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

fn pow_mod(mut a: u32, mut e: u32, q: u32) -> u32 {
    let mut acc = 1u32;
    a %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % q;
        }
        a = a * a % q;
        e >>= 1;
    }
    acc
}

/// Built-in irreducible modulus for `(q, m)`: a fixed low-weight table for
/// `q = 2`, otherwise the first irreducible monic polynomial found in
/// lexicographic order of the lower coefficients (read as a base-q number).
pub fn default_modulus(q: u8, m: usize) -> Vec<u8> {
    if q == 2 {
        if let Some(&(_, taps)) = BINARY_TABLE.iter().find(|(d, _)| *d == m) {
            let mut f = vec![0u8; m + 1];
            f[m] = 1;
            for &t in taps {
                f[t] = 1;
            }
            return f;
        }
    }
    let mut lower = vec![0u8; m];
    lower[0] = 1;
    loop {
        let mut f = lower.clone();
        f.push(1);
        if poly::is_irreducible(&f, q) {
            return f;
        }
        for c in lower.iter_mut() {
            *c += 1;
            if *c < q {
                break;
            }
            *c = 0;
        }
    }
}

/// `(m, lower-degree nonzero exponents)` of binary moduli.
const BINARY_TABLE: &[(usize, &[usize])] = &[
    (1, &[0]),
    (2, &[0, 1]),
    (3, &[0, 1]),
    (4, &[0, 1]),
    (5, &[0, 2]),
    (6, &[0, 1]),
    (7, &[0, 1]),
    (8, &[0, 1, 3, 4]),
    (9, &[0, 4]),
    (10, &[0, 3]),
    (11, &[0, 2]),
    (12, &[0, 1, 4, 6]),
    (13, &[0, 1, 3, 4]),
    (14, &[0, 1, 6, 10]),
    (15, &[0, 1]),
    (16, &[0, 1, 3, 12]),
    (17, &[0, 3]),
    (18, &[0, 7]),
    (19, &[0, 1, 2, 5]),
    (20, &[0, 3]),
];

/// Dense polynomials over `F_q`, least-degree-first, trimmed of leading zeros.
pub(crate) mod poly {
    use alloc::vec;
    use alloc::vec::Vec;

    pub fn trim(mut p: Vec<u8>) -> Vec<u8> {
        while p.last() == Some(&0) {
            p.pop();
        }
        p
    }

    fn inv_mod(c: u8, q: u8) -> u8 {
        let q = u32::from(q);
        let mut acc = 1u32;
        let mut base = u32::from(c) % q;
        let mut e = q - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % q;
            }
            base = base * base % q;
            e >>= 1;
        }
        acc as u8
    }

    pub fn sub(a: &[u8], b: &[u8], q: u8) -> Vec<u8> {
        let n = a.len().max(b.len());
        let q16 = u16::from(q);
        let mut out = vec![0u8; n];
        for (i, o) in out.iter_mut().enumerate() {
            let x = u16::from(*a.get(i).unwrap_or(&0));
            let y = u16::from(*b.get(i).unwrap_or(&0));
            *o = ((x + q16 - y) % q16) as u8;
        }
        trim(out)
    }

    pub fn mul(a: &[u8], b: &[u8], q: u8) -> Vec<u8> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let q32 = u32::from(q);
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + u32::from(x) * u32::from(y)) % q32;
            }
        }
        trim(out.into_iter().map(|c| c as u8).collect())
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn divrem(a: &[u8], b: &[u8], q: u8) -> (Vec<u8>, Vec<u8>) {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let q32 = u32::from(q);
        let lead_inv = u32::from(inv_mod(*b.last().expect("nonzero divisor"), q));
        let mut quot = vec![0u8; r.len() - b.len() + 1];
        while r.len() >= b.len() && !r.is_empty() {
            let shift = r.len() - b.len();
            let c = u32::from(*r.last().unwrap()) * lead_inv % q32;
            quot[shift] = c as u8;
            for (i, &bi) in b.iter().enumerate() {
                let t = &mut r[shift + i];
                *t = ((u32::from(*t) + q32 * q32 - c * u32::from(bi)) % q32) as u8;
            }
            r = trim(r);
        }
        (trim(quot), r)
    }

    pub fn rem(a: &[u8], b: &[u8], q: u8) -> Vec<u8> {
        divrem(a, b, q).1
    }

    pub fn gcd(a: &[u8], b: &[u8], q: u8) -> Vec<u8> {
        let mut x = trim(a.to_vec());
        let mut y = trim(b.to_vec());
        while !y.is_empty() {
            let r = rem(&x, &y, q);
            x = y;
            y = r;
        }
        x
    }

    pub fn mulmod(a: &[u8], b: &[u8], f: &[u8], q: u8) -> Vec<u8> {
        rem(&mul(a, b, q), f, q)
    }

    pub fn powmod(a: &[u8], mut e: u64, f: &[u8], q: u8) -> Vec<u8> {
        let mut base = rem(a, f, q);
        let mut acc = vec![1u8];
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, f, q);
            }
            base = mulmod(&base, &base, f, q);
            e >>= 1;
        }
        acc
    }

    /// Ben-Or: `f` is irreducible iff `gcd(x^{q^i} - x, f) = 1` for all `i ≤ deg/2`.
    pub fn is_irreducible(f: &[u8], q: u8) -> bool {
        let f = trim(f.to_vec());
        let deg = f.len().saturating_sub(1);
        if deg == 0 {
            return false;
        }
        let x = vec![0u8, 1];
        let mut h = rem(&x, &f, q);
        for _ in 1..=deg / 2 {
            h = powmod(&h, u64::from(q), &f, q);
            let g = gcd(&sub(&h, &x, q), &f, q);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }

    /// Inverse of `a` modulo irreducible `f`; `a` nonzero with `deg a < deg f`.
    pub fn inverse_mod(a: &[u8], f: &[u8], q: u8, prime_inv: &[u8]) -> Vec<u8> {
        let mut r0 = trim(f.to_vec());
        let mut r1 = trim(a.to_vec());
        let mut s0: Vec<u8> = Vec::new();
        let mut s1: Vec<u8> = vec![1];
        while !r1.is_empty() {
            let (quot, r) = divrem(&r0, &r1, q);
            let s = sub(&s0, &mul(&quot, &s1, q), q);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        debug_assert_eq!(r0.len(), 1);
        let c = prime_inv[r0[0] as usize];
        let out = mul(&s0, &[c], q);
        rem(&out, f, q)
    }
}
