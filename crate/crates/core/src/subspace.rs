//! `F_q`-subspaces of `F_{q^m}`.
//!
//! A [`Subspace`] keeps its basis in reduced row-echelon form over the
//! coordinate columns, so two values describe the same set exactly when
//! their bases are identical.

use alloc::vec::Vec;

use rand::Rng;

use crate::field::{checked_pow, FieldContext, FieldElement, MAX_DEGREE};
use crate::{fq, Error, Result};

/// Upper bound on the number of elements an enumeration may produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget(pub u64);

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget(1 << 20)
    }
}

impl EnumerationBudget {
    /// Checks that `q^exp` items fit; returns the count.
    pub fn admit(&self, q: u32, exp: u32) -> Result<u64> {
        match checked_pow(q, exp) {
            Some(n) if n <= u128::from(self.0) => Ok(n as u64),
            Some(n) => Err(Error::EnumerationTooLarge { required: n, budget: self.0 }),
            None => Err(Error::EnumerationTooLarge { required: u128::MAX, budget: self.0 }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    basis: Vec<FieldElement>,
    pivots: Vec<u8>,
}

impl Subspace {
    pub fn zero() -> Self {
        Subspace { basis: Vec::new(), pivots: Vec::new() }
    }

    /// The whole of `F_{q^m}`.
    pub fn full(ctx: &FieldContext) -> Self {
        let basis: Vec<_> = (0..ctx.m()).map(|i| ctx.monomial(i).expect("i < m")).collect();
        Self::span_unchecked(ctx, basis)
    }

    /// Canonical subspace spanned by `elements`.
    pub fn span(ctx: &FieldContext, elements: &[FieldElement]) -> Result<Self> {
        for e in elements {
            ctx.check(e)?;
        }
        Ok(Self::span_unchecked(ctx, elements.to_vec()))
    }

    pub(crate) fn span_unchecked(ctx: &FieldContext, rows: Vec<FieldElement>) -> Self {
        Self::span_iter(ctx, rows)
    }

    /// Span of an arbitrary stream of elements. Elements are reduced one at
    /// a time against an echelon basis, so long inputs cost `O(len · dim · m)`.
    pub fn span_iter<I>(ctx: &FieldContext, elements: I) -> Self
    where
        I: IntoIterator<Item = FieldElement>,
    {
        let m = ctx.m();
        let q = ctx.q() as u8;
        let mut echelon = Subspace::zero();
        for e in elements {
            if echelon.dim() == m {
                break;
            }
            let mut v = echelon.reduce(ctx, &e);
            let Some(p) = v.coords().iter().position(|&c| c != 0) else {
                continue;
            };
            let lead = v.coords()[p];
            if lead != 1 {
                v = ctx.scale_prime(ctx.prime_inv(lead), &v);
            }
            echelon.basis.push(v);
            echelon.pivots.push(p as u8);
        }
        let mut rows = echelon.basis;
        let pivots = fq::rref(&mut rows, m, q, ctx.prime_inv_table());
        Subspace { basis: rows, pivots: pivots.into_iter().map(|p| p as u8).collect() }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Reduced row-echelon basis.
    pub fn basis(&self) -> &[FieldElement] {
        &self.basis
    }

    /// Pivot coordinate of each basis row.
    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.iter().map(|&p| p as usize)
    }

    /// Residue of `a` after reduction against the basis.
    fn reduce(&self, ctx: &FieldContext, a: &FieldElement) -> FieldElement {
        let mut r = *a;
        let q = ctx.q() as u16;
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = r.coords()[p as usize];
            if c != 0 {
                let neg = q - u16::from(c);
                let m = ctx.m();
                let dst = &mut r.raw_mut()[..m];
                for (d, &s) in dst.iter_mut().zip(&row.coords()[..m]) {
                    if s != 0 {
                        *d = ((u16::from(*d) + neg * u16::from(s)) % q) as u8;
                    }
                }
            }
        }
        r
    }

    pub fn contains(&self, ctx: &FieldContext, a: &FieldElement) -> bool {
        ctx.check(a).is_ok() && self.reduce(ctx, a).is_zero()
    }

    pub fn is_subspace_of(&self, ctx: &FieldContext, other: &Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(ctx, b))
    }

    /// `A + B`.
    pub fn sum(&self, ctx: &FieldContext, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().copied().filter(|b| !self.contains(ctx, b)));
        Self::span_unchecked(ctx, rows)
    }

    /// `A ∩ B` by the Zassenhaus algorithm: reduce the stack
    /// `[a | a]` over `[b | 0]`; rows with a vanishing left half carry the
    /// intersection in their right half.
    pub fn intersect(&self, ctx: &FieldContext, other: &Subspace) -> Subspace {
        if self.is_zero() || other.is_zero() {
            return Subspace::zero();
        }
        let m = ctx.m();
        let mut rows: Vec<[u8; 2 * MAX_DEGREE]> = Vec::with_capacity(self.dim() + other.dim());
        for a in &self.basis {
            let mut r = [0u8; 2 * MAX_DEGREE];
            r[..m].copy_from_slice(a.coords());
            r[m..2 * m].copy_from_slice(a.coords());
            rows.push(r);
        }
        for b in &other.basis {
            let mut r = [0u8; 2 * MAX_DEGREE];
            r[..m].copy_from_slice(b.coords());
            rows.push(r);
        }
        let q = ctx.q() as u8;
        fq::rref(&mut rows, 2 * m, q, ctx.prime_inv_table());
        let meet: Vec<FieldElement> = rows
            .iter()
            .filter(|r| r[..m].iter().all(|&c| c == 0))
            .map(|r| ctx.element(&r[m..2 * m]).expect("coordinates in range"))
            .collect();
        Self::span_unchecked(ctx, meet)
    }

    /// Product space `A.B`, spanned by all products of basis elements.
    pub fn product(&self, ctx: &FieldContext, other: &Subspace) -> Subspace {
        let mut rows = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.basis {
            for b in &other.basis {
                rows.push(ctx.mul(a, b));
            }
        }
        Self::span_unchecked(ctx, rows)
    }

    /// `λV`; fails for `λ = 0`.
    pub fn scale(&self, ctx: &FieldContext, lambda: &FieldElement) -> Result<Subspace> {
        ctx.check(lambda)?;
        if lambda.is_zero() {
            return Err(Error::InvalidScalar);
        }
        let rows = self.basis.iter().map(|b| ctx.mul(lambda, b)).collect();
        Ok(Self::span_unchecked(ctx, rows))
    }

    /// All `q^dim` elements, zero first.
    pub fn enumerate(&self, ctx: &FieldContext, budget: EnumerationBudget) -> Result<Vec<FieldElement>> {
        let total = budget.admit(ctx.q(), self.dim() as u32)? as usize;
        let q = ctx.q() as u8;
        let mut out = Vec::with_capacity(total);
        let mut digits = alloc::vec![0u8; self.dim()];
        let mut cur = ctx.zero();
        out.push(cur);
        // Mixed-radix counter over the coefficients. A digit wrapping from
        // q-1 to 0 is also one more add of its basis row, since q copies vanish.
        for _ in 1..total {
            let mut i = 0;
            loop {
                cur = ctx.add(&cur, &self.basis[i]);
                digits[i] += 1;
                if digits[i] < q {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            out.push(cur);
        }
        Ok(out)
    }

    /// `{v^{-1} : v ∈ V \ {0}}`; empty for the zero subspace.
    pub fn inverse_set(&self, ctx: &FieldContext, budget: EnumerationBudget) -> Result<Vec<FieldElement>> {
        if self.is_zero() {
            return Ok(Vec::new());
        }
        Ok(self
            .enumerate(ctx, budget)?
            .iter()
            .filter(|v| !v.is_zero())
            .map(|v| ctx.inv(v).expect("nonzero"))
            .collect())
    }

    /// Uniform element of the subspace.
    pub fn random_element<R: Rng + ?Sized>(&self, ctx: &FieldContext, rng: &mut R) -> FieldElement {
        let q = ctx.q() as u8;
        self.basis.iter().fold(ctx.zero(), |acc, b| {
            let c = rng.gen_range(0..q);
            if c == 0 {
                acc
            } else {
                ctx.add(&acc, &ctx.scale_prime(c, b))
            }
        })
    }

    /// Random subspace of dimension exactly `d`: draw elements and keep the
    /// ones that enlarge the span.
    pub fn random<R: Rng + ?Sized>(ctx: &FieldContext, d: usize, rng: &mut R) -> Result<Subspace> {
        if d > ctx.m() {
            return Err(Error::InvalidParameters("subspace dimension exceeds m"));
        }
        let mut v = Subspace::zero();
        while v.dim() < d {
            let e = ctx.random_element(rng);
            if !v.contains(ctx, &e) {
                let mut rows = v.basis.clone();
                rows.push(e);
                v = Self::span_unchecked(ctx, rows);
            }
        }
        Ok(v)
    }

    /// Some `λ` with `self = λ·other`, if any. Any such `λ` maps a fixed
    /// nonzero `b₀ ∈ other` into `self`, so only `a·b₀^{-1}` for nonzero
    /// `a ∈ self` need testing.
    pub fn scalar_multiple_of(
        &self,
        ctx: &FieldContext,
        other: &Subspace,
        budget: EnumerationBudget,
    ) -> Result<Option<FieldElement>> {
        if self.dim() != other.dim() || self.is_zero() {
            return Err(Error::InvalidParameters("scalar-multiple test needs equal positive dimensions"));
        }
        let b0_inv = ctx.inv(&other.basis[0])?;
        for a in self.enumerate(ctx, budget)? {
            if a.is_zero() {
                continue;
            }
            let lambda = ctx.mul(&a, &b0_inv);
            if other.scale(ctx, &lambda)? == *self {
                return Ok(Some(lambda));
            }
        }
        Ok(None)
    }
}
