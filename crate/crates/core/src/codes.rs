//! LRPC and row-LRPC codes: construction, encoding and syndromes.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::field::{FieldContext, FieldElement};
use crate::linalg::{rank_weight, MatrixFqm, VectorFqm};
use crate::subspace::{EnumerationBudget, Subspace};
use crate::{Error, Result};

/// Attempts allowed for each randomised resampling loop.
pub const RESAMPLE_BUDGET: usize = 1000;

/// A code given by a full-rank `(n-k) × n` parity check matrix whose
/// `i`-th row has all its entries in the subspace `row_supports[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowLrpcCode {
    ctx: FieldContext,
    n: usize,
    k: usize,
    rho: usize,
    h: MatrixFqm,
    row_supports: Vec<Subspace>,
}

/// Generator matrix of a code, `G · H^T = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodewordContext {
    pub g: MatrixFqm,
}

impl RowLrpcCode {
    /// Wraps a parity check matrix with explicit row supports after checking
    /// every invariant.
    pub fn new(
        ctx: &FieldContext,
        n: usize,
        k: usize,
        rho: usize,
        h: MatrixFqm,
        row_supports: Vec<Subspace>,
    ) -> Result<Self> {
        let code = RowLrpcCode { ctx: ctx.clone(), n, k, rho, h, row_supports };
        code.validate()?;
        Ok(code)
    }

    /// Takes the span of each row as its support.
    pub fn from_parity_check(ctx: &FieldContext, n: usize, k: usize, rho: usize, h: MatrixFqm) -> Result<Self> {
        if h.rows() + k != n || h.cols() != n {
            return Err(Error::ShapeMismatch);
        }
        let supports = (0..h.rows()).map(|i| crate::linalg::support(ctx, h.row(i))).collect();
        Self::new(ctx, n, k, rho, h, supports)
    }

    pub fn validate(&self) -> Result<()> {
        let ctx = &self.ctx;
        if self.k >= self.n || self.h.rows() != self.n - self.k || self.h.cols() != self.n {
            return Err(Error::ShapeMismatch);
        }
        if self.row_supports.len() != self.h.rows() {
            return Err(Error::ShapeMismatch);
        }
        for e in self.h.entries() {
            ctx.check(e)?;
        }
        for (i, sup) in self.row_supports.iter().enumerate() {
            if sup.dim() > self.rho || rank_weight(ctx, self.h.row(i)) > self.rho {
                return Err(Error::InvalidParameters("row exceeds the row weight bound"));
            }
            if !self.h.row(i).iter().all(|e| sup.contains(ctx, e)) {
                return Err(Error::InvalidParameters("row entry outside its support"));
            }
        }
        if self.h.rank(ctx) != self.n - self.k {
            return Err(Error::InvalidParameters("parity check matrix is not full rank"));
        }
        Ok(())
    }

    pub fn ctx(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Row weight bound `ρ`.
    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn parity_check(&self) -> &MatrixFqm {
        &self.h
    }

    pub fn row_supports(&self) -> &[Subspace] {
        &self.row_supports
    }

    /// `s = y · H^T`.
    pub fn syndrome(&self, y: &[FieldElement]) -> Result<VectorFqm> {
        if y.len() != self.n {
            return Err(Error::ShapeMismatch);
        }
        self.h.mul_vec(&self.ctx, y)
    }

    /// Generator matrix from the null space of `H`.
    pub fn generator(&self) -> CodewordContext {
        CodewordContext { g: self.h.null_space(&self.ctx) }
    }
}

impl CodewordContext {
    pub fn k(&self) -> usize {
        self.g.rows()
    }

    /// `msg · G`.
    pub fn encode(&self, ctx: &FieldContext, msg: &[FieldElement]) -> Result<VectorFqm> {
        if msg.len() != self.g.rows() {
            return Err(Error::ShapeMismatch);
        }
        let mut out = vec![ctx.zero(); self.g.cols()];
        for (i, m) in msg.iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            for (o, g) in out.iter_mut().zip(self.g.row(i)) {
                *o = ctx.add(o, &ctx.mul(m, g));
            }
        }
        Ok(out)
    }
}

fn check_dims(ctx: &FieldContext, n: usize, k: usize, weight: usize) -> Result<()> {
    if k == 0 || k >= n {
        return Err(Error::InvalidParameters("need 1 <= k < n"));
    }
    if weight == 0 || weight > ctx.m() {
        return Err(Error::InvalidParameters("need 1 <= weight <= m"));
    }
    Ok(())
}

/// Row of `n` entries drawn uniformly from `sup`, resampled until its
/// rank weight equals `dim(sup)`.
fn sample_row<R: Rng + ?Sized>(ctx: &FieldContext, sup: &Subspace, n: usize, rng: &mut R) -> Result<Vec<FieldElement>> {
    for _ in 0..RESAMPLE_BUDGET {
        let row: Vec<_> = (0..n).map(|_| sup.random_element(ctx, rng)).collect();
        if rank_weight(ctx, &row) == sup.dim() {
            return Ok(row);
        }
    }
    Err(Error::ConstructionFailed)
}

/// Random row-LRPC code: row `i` has its own random `ρ`-dimensional support
/// and rank weight exactly `ρ`; `H` is resampled until full rank.
pub fn sample_row_lrpc<R: Rng + ?Sized>(
    ctx: &FieldContext,
    n: usize,
    k: usize,
    rho: usize,
    rng: &mut R,
) -> Result<RowLrpcCode> {
    check_dims(ctx, n, k, rho)?;
    if rho > n {
        return Err(Error::ConstructionFailed);
    }
    for _ in 0..RESAMPLE_BUDGET {
        let mut supports = Vec::with_capacity(n - k);
        let mut rows = Vec::with_capacity(n - k);
        for _ in 0..n - k {
            let sup = Subspace::random(ctx, rho, rng)?;
            rows.push(sample_row(ctx, &sup, n, rng)?);
            supports.push(sup);
        }
        let h = MatrixFqm::from_rows(rows)?;
        if h.rank(ctx) == n - k {
            return Ok(RowLrpcCode { ctx: ctx.clone(), n, k, rho, h, row_supports: supports });
        }
    }
    Err(Error::ConstructionFailed)
}

/// Random LRPC code of weight `δ`: every entry comes from one shared
/// `δ`-dimensional subspace, which is also recorded as each row's support.
pub fn sample_lrpc<R: Rng + ?Sized>(
    ctx: &FieldContext,
    n: usize,
    k: usize,
    delta: usize,
    rng: &mut R,
) -> Result<RowLrpcCode> {
    check_dims(ctx, n, k, delta)?;
    let global = Subspace::random(ctx, delta, rng)?;
    for _ in 0..RESAMPLE_BUDGET {
        let entries = (0..(n - k) * n).map(|_| global.random_element(ctx, rng)).collect();
        let h = MatrixFqm::from_entries(n - k, n, entries)?;
        if h.rank(ctx) == n - k {
            return Ok(RowLrpcCode {
                ctx: ctx.clone(),
                n,
                k,
                rho: delta,
                h,
                row_supports: vec![global; n - k],
            });
        }
    }
    Err(Error::ConstructionFailed)
}

/// Row-LRPC code of row weight `ρ` none of whose parity check matrices has
/// weight `ρ`:
///
/// ```text
///     | a_1 .. a_ρ   0  ..  0    0 |
/// H = |  0  ..  0   b_1 .. b_ρ   0 |
///     |  0  ..  0    0  ..  0    J |
/// ```
///
/// with `J = [I_{n-k-2} | 0]` placed right after column `2ρ`, and
/// `A = span(a)`, `B = span(b)` resampled until `A ≠ λB` for every `λ`.
pub fn theorem1_construction<R: Rng + ?Sized>(
    ctx: &FieldContext,
    n: usize,
    k: usize,
    rho: usize,
    rng: &mut R,
) -> Result<RowLrpcCode> {
    if rho < 2 || rho >= ctx.m() {
        return Err(Error::InvalidParameters("need 2 <= rho < m"));
    }
    if k + 2 < 2 * rho || k + 2 > n {
        return Err(Error::InvalidParameters("need 2rho - 2 <= k <= n - 2"));
    }
    let budget = EnumerationBudget::default();
    let mut pair = None;
    for _ in 0..RESAMPLE_BUDGET {
        let a = Subspace::random(ctx, rho, rng)?;
        let b = Subspace::random(ctx, rho, rng)?;
        if a.scalar_multiple_of(ctx, &b, budget)?.is_none() {
            pair = Some((a, b));
            break;
        }
    }
    let (a, b) = pair.ok_or(Error::ConstructionFailed)?;

    let mut h = MatrixFqm::zeros(ctx, n - k, n);
    for (j, e) in a.basis().iter().enumerate() {
        h.set(0, j, *e);
    }
    for (j, e) in b.basis().iter().enumerate() {
        h.set(1, rho + j, *e);
    }
    for t in 0..n - k - 2 {
        h.set(2 + t, 2 * rho + t, ctx.one());
    }
    let unit = Subspace::span(ctx, &[ctx.one()])?;
    let mut supports = vec![a, b];
    supports.extend(core::iter::repeat(unit).take(n - k - 2));
    RowLrpcCode::new(ctx, n, k, rho, h, supports)
}

/// Uniform invertible `n × n` matrix by rejection.
pub fn random_invertible<R: Rng + ?Sized>(ctx: &FieldContext, n: usize, rng: &mut R) -> MatrixFqm {
    loop {
        let t = MatrixFqm::random(ctx, n, n, rng);
        if t.rank(ctx) == n {
            return t;
        }
    }
}

/// Minimum of `matrix_weight(T·H)` over `trials` random invertible `T`.
pub fn weight_probe<R: Rng + ?Sized>(code: &RowLrpcCode, trials: usize, rng: &mut R) -> usize {
    let ctx = &code.ctx;
    let r = code.h.rows();
    (0..trials)
        .map(|_| {
            let t = random_invertible(ctx, r, rng);
            t.mul(ctx, &code.h).expect("square transform").matrix_weight(ctx)
        })
        .min()
        .unwrap_or(usize::MAX)
}

/// Divides each row of a row-weight-one matrix by one of its nonzero
/// entries, giving an equivalent parity check matrix over `F_q`.
pub fn normalize_weight_one(ctx: &FieldContext, h: &MatrixFqm) -> Result<MatrixFqm> {
    let mut out = h.clone();
    for i in 0..h.rows() {
        let row = h.row(i);
        if rank_weight(ctx, row) != 1 {
            return Err(Error::NotNormalizable);
        }
        let pivot = row.iter().find(|e| !e.is_zero()).expect("weight one row is nonzero");
        let inv = ctx.inv(pivot)?;
        for (o, e) in out.row_mut(i).iter_mut().zip(row) {
            *o = ctx.mul(&inv, e);
        }
    }
    Ok(out)
}
