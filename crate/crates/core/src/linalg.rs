//! Vectors and matrices over `F_{q^m}` and their rank-metric weights.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::{FieldContext, FieldElement};
use crate::subspace::Subspace;
use crate::{fq, Error, Result};

/// A vector over `F_{q^m}`.
pub type VectorFqm = Vec<FieldElement>;

/// Outcome of solving a linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution<T> {
    Unique(Vec<T>),
    Inconsistent,
    /// Affine solution space `particular + span(kernel)`.
    Underdetermined { particular: Vec<T>, kernel: Vec<Vec<T>> },
}

impl<T> Solution<T> {
    /// Dimension of the solution space, `None` when inconsistent.
    pub fn dimension(&self) -> Option<usize> {
        match self {
            Solution::Unique(_) => Some(0),
            Solution::Inconsistent => None,
            Solution::Underdetermined { kernel, .. } => Some(kernel.len()),
        }
    }
}

/// Rank weight: dimension of the `F_q`-span of the entries.
pub fn rank_weight(ctx: &FieldContext, v: &[FieldElement]) -> usize {
    let mut rows: Vec<FieldElement> = v.iter().copied().filter(|e| !e.is_zero()).collect();
    fq::rref(&mut rows, ctx.m(), ctx.q() as u8, ctx.prime_inv_table()).len()
}

/// Support of a vector: the `F_q`-span of its entries.
pub fn support(ctx: &FieldContext, v: &[FieldElement]) -> Subspace {
    Subspace::span_unchecked(ctx, v.to_vec())
}

/// Dense row-major matrix over `F_{q^m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFqm {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

impl MatrixFqm {
    pub fn zeros(ctx: &FieldContext, rows: usize, cols: usize) -> Self {
        MatrixFqm { rows, cols, entries: vec![ctx.zero(); rows * cols] }
    }

    pub fn identity(ctx: &FieldContext, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, ctx.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch);
        }
        let n = rows.len();
        Ok(MatrixFqm { rows: n, cols, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<FieldElement>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch);
        }
        Ok(MatrixFqm { rows, cols, entries })
    }

    pub fn random<R: rand::Rng + ?Sized>(ctx: &FieldContext, rows: usize, cols: usize, rng: &mut R) -> Self {
        let entries = (0..rows * cols).map(|_| ctx.random_element(rng)).collect();
        MatrixFqm { rows, cols, entries }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [FieldElement] {
        &mut self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn transpose(&self) -> MatrixFqm {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(*self.get(i, j));
            }
        }
        MatrixFqm { rows: self.cols, cols: self.rows, entries }
    }

    pub fn mul(&self, ctx: &FieldContext, other: &MatrixFqm) -> Result<MatrixFqm> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch);
        }
        let mut out = MatrixFqm::zeros(ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = ctx.mul(a, other.get(l, j));
                    let cur = out.get(i, j);
                    out.set(i, j, ctx.add(cur, &p));
                }
            }
        }
        Ok(out)
    }

    /// `M · v^T`.
    pub fn mul_vec(&self, ctx: &FieldContext, v: &[FieldElement]) -> Result<VectorFqm> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch);
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(ctx.zero(), |acc, (a, b)| ctx.add(&acc, &ctx.mul(a, b)))
            })
            .collect())
    }

    /// Weight of the matrix: rank weight of all its entries together.
    pub fn matrix_weight(&self, ctx: &FieldContext) -> usize {
        rank_weight(ctx, &self.entries)
    }

    /// Maximum rank weight over the rows.
    pub fn row_weight(&self, ctx: &FieldContext) -> usize {
        (0..self.rows).map(|i| rank_weight(ctx, self.row(i))).max().unwrap_or(0)
    }

    /// Reduced row-echelon form over `F_{q^m}` and its pivot columns.
    pub fn rref(&self, ctx: &FieldContext) -> (MatrixFqm, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place(ctx, self.cols);
        (m, pivots)
    }

    fn rref_in_place(&mut self, ctx: &FieldContext, width: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..width {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&i| !self.get(i, col).is_zero()) else {
                continue;
            };
            self.swap_rows(rank, p);
            let inv = ctx.inv(self.get(rank, col)).expect("nonzero pivot");
            for j in col..self.cols {
                let v = ctx.mul(&inv, self.get(rank, j));
                self.set(rank, j, v);
            }
            for i in 0..self.rows {
                if i == rank || self.get(i, col).is_zero() {
                    continue;
                }
                let f = *self.get(i, col);
                for j in col..self.cols {
                    let v = ctx.sub(self.get(i, j), &ctx.mul(&f, self.get(rank, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self, ctx: &FieldContext) -> usize {
        self.rref(ctx).1.len()
    }

    /// Determinant by elimination.
    pub fn det(&self, ctx: &FieldContext) -> Result<FieldElement> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch);
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = ctx.one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !m.get(i, col).is_zero()) else {
                return Ok(ctx.zero());
            };
            if p != col {
                m.swap_rows(col, p);
                det = ctx.neg(&det);
            }
            let pivot = *m.get(col, col);
            det = ctx.mul(&det, &pivot);
            let inv = ctx.inv(&pivot)?;
            for i in col + 1..n {
                let f = ctx.mul(m.get(i, col), &inv);
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = ctx.sub(m.get(i, j), &ctx.mul(&f, m.get(col, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Solves `M x^T = b`.
    pub fn solve(&self, ctx: &FieldContext, b: &[FieldElement]) -> Result<Solution<FieldElement>> {
        if b.len() != self.rows {
            return Err(Error::ShapeMismatch);
        }
        let n = self.cols;
        let mut aug = MatrixFqm::zeros(ctx, self.rows, n + 1);
        for i in 0..self.rows {
            aug.row_mut(i)[..n].copy_from_slice(self.row(i));
            aug.set(i, n, b[i]);
        }
        let pivots = aug.rref_in_place(ctx, n + 1);
        if pivots.last() == Some(&n) {
            return Ok(Solution::Inconsistent);
        }
        let mut particular = vec![ctx.zero(); n];
        for (r, &p) in pivots.iter().enumerate() {
            particular[p] = *aug.get(r, n);
        }
        if pivots.len() == n {
            return Ok(Solution::Unique(particular));
        }
        let kernel = aug.free_basis(ctx, &pivots, n);
        Ok(Solution::Underdetermined { particular, kernel })
    }

    fn free_basis(&self, ctx: &FieldContext, pivots: &[usize], n: usize) -> Vec<Vec<FieldElement>> {
        let mut is_pivot = vec![false; n];
        for &p in pivots {
            is_pivot[p] = true;
        }
        (0..n)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![ctx.zero(); n];
                v[f] = ctx.one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = ctx.neg(self.get(r, f));
                }
                v
            })
            .collect()
    }

    /// Basis (as rows) of `{x : M x^T = 0}`. The basis is read off the
    /// reduced row-echelon form, so matrices with the same row space yield
    /// identical output.
    pub fn null_space(&self, ctx: &FieldContext) -> MatrixFqm {
        let (r, pivots) = self.rref(ctx);
        let rows = r.free_basis(ctx, &pivots, self.cols);
        let k = rows.len();
        MatrixFqm { rows: k, cols: self.cols, entries: rows.into_iter().flatten().collect() }
    }
}

/// Solves `Σ_u coeffs[i][u] · λ_u = rhs_i` for `λ ∈ F_q^{unknowns}` by
/// expanding each equation over `F_{q^m}` into `m` coordinate equations.
pub fn unfold_solve(ctx: &FieldContext, coeffs: &MatrixFqm, rhs: &[FieldElement]) -> Result<Solution<u8>> {
    if coeffs.rows() != rhs.len() {
        return Err(Error::ShapeMismatch);
    }
    let (a, b) = unfold_system(ctx, coeffs, rhs);
    Ok(fq::solve(&a, &b, coeffs.cols(), ctx.q() as u8, ctx.prime_inv_table()))
}

/// The `m·rows × cols` system over `F_q` behind [`unfold_solve`].
pub fn unfold_system(ctx: &FieldContext, coeffs: &MatrixFqm, rhs: &[FieldElement]) -> (Vec<Vec<u8>>, Vec<u8>) {
    let m = ctx.m();
    let mut a = Vec::with_capacity(coeffs.rows() * m);
    let mut b = Vec::with_capacity(coeffs.rows() * m);
    for i in 0..coeffs.rows() {
        for t in 0..m {
            a.push(coeffs.row(i).iter().map(|c| c.coords()[t]).collect());
            b.push(rhs[i].coords()[t]);
        }
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf8() -> FieldContext {
        FieldContext::new(2, 3, &[1, 1, 0, 1]).unwrap()
    }

    #[test]
    fn rank_weight_examples() {
        let ctx = gf8();
        let one = ctx.one();
        let x = ctx.monomial(1).unwrap();
        let x2 = ctx.monomial(2).unwrap();
        assert_eq!(rank_weight(&ctx, &[ctx.zero(); 4]), 0);
        assert_eq!(rank_weight(&ctx, &[x; 5]), 1);
        assert_eq!(rank_weight(&ctx, &[one, x, ctx.add(&one, &x), x2]), 3);
    }

    #[test]
    fn det_examples() {
        let ctx = FieldContext::with_default_modulus(3, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        assert_eq!(MatrixFqm::identity(&ctx, 4).det(&ctx).unwrap(), ctx.one());
        let mut m = MatrixFqm::random(&ctx, 3, 3, &mut rng);
        let r0 = m.row(0).to_vec();
        m.row_mut(2).copy_from_slice(&r0);
        assert!(m.det(&ctx).unwrap().is_zero());
        for _ in 0..50 {
            let m = MatrixFqm::random(&ctx, 2, 2, &mut rng);
            let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
            let expect = ctx.sub(&ctx.mul(a, d), &ctx.mul(b, c));
            assert_eq!(m.det(&ctx).unwrap(), expect);
        }
        assert_eq!(MatrixFqm::zeros(&ctx, 2, 3).det(&ctx), Err(Error::ShapeMismatch));
    }

    #[test]
    fn solve_examples() {
        let ctx = FieldContext::with_default_modulus(2, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let b: Vec<_> = (0..3).map(|_| ctx.random_element(&mut rng)).collect();
        assert_eq!(MatrixFqm::identity(&ctx, 3).solve(&ctx, &b).unwrap(), Solution::Unique(b.clone()));
        let nz = vec![ctx.one(); 3];
        assert_eq!(MatrixFqm::zeros(&ctx, 3, 3).solve(&ctx, &nz).unwrap(), Solution::Inconsistent);
        assert_eq!(MatrixFqm::zeros(&ctx, 3, 3).solve(&ctx, &b[..2]), Err(Error::ShapeMismatch));
        // Cramer cross-check on 2×2 systems
        let mut checked = 0;
        while checked < 50 {
            let m = MatrixFqm::random(&ctx, 2, 2, &mut rng);
            let d = m.det(&ctx).unwrap();
            if d.is_zero() {
                continue;
            }
            let rhs = [ctx.random_element(&mut rng), ctx.random_element(&mut rng)];
            let (a, bb, c, dd) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
            let di = ctx.inv(&d).unwrap();
            let x1 = ctx.mul(&di, &ctx.sub(&ctx.mul(&rhs[0], dd), &ctx.mul(bb, &rhs[1])));
            let x2 = ctx.mul(&di, &ctx.sub(&ctx.mul(a, &rhs[1]), &ctx.mul(c, &rhs[0])));
            assert_eq!(m.solve(&ctx, &rhs).unwrap(), Solution::Unique(vec![x1, x2]));
            checked += 1;
        }
    }

    #[test]
    fn underdetermined_kernel_is_valid() {
        let ctx = FieldContext::with_default_modulus(3, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let m = MatrixFqm::random(&ctx, 2, 4, &mut rng);
        let x: Vec<_> = (0..4).map(|_| ctx.random_element(&mut rng)).collect();
        let b = m.mul_vec(&ctx, &x).unwrap();
        match m.solve(&ctx, &b).unwrap() {
            Solution::Underdetermined { particular, kernel } => {
                assert_eq!(kernel.len(), 2);
                assert_eq!(m.mul_vec(&ctx, &particular).unwrap(), b);
                for k in kernel {
                    assert!(m.mul_vec(&ctx, &k).unwrap().iter().all(FieldElement::is_zero));
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn null_space_examples() {
        let ctx = FieldContext::with_default_modulus(2, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        assert_eq!(MatrixFqm::identity(&ctx, 3).null_space(&ctx).rows(), 0);
        let mut found = 0;
        while found < 20 {
            let m = MatrixFqm::random(&ctx, 2, 4, &mut rng);
            if m.rank(&ctx) != 2 {
                continue;
            }
            let ns = m.null_space(&ctx);
            assert_eq!(ns.rows(), 2);
            assert_eq!(ns.rank(&ctx), 2);
            for i in 0..ns.rows() {
                assert!(m.mul_vec(&ctx, ns.row(i)).unwrap().iter().all(FieldElement::is_zero));
            }
            found += 1;
        }
    }

    #[test]
    fn unfold_examples() {
        let ctx = FieldContext::with_default_modulus(3, 4).unwrap();
        let one = MatrixFqm::from_rows(vec![vec![ctx.one()]]).unwrap();
        assert_eq!(unfold_solve(&ctx, &one, &[ctx.from_prime(2)]).unwrap(), Solution::Unique(vec![2]));
        let x = ctx.monomial(1).unwrap();
        let a = MatrixFqm::from_rows(vec![vec![x]]).unwrap();
        assert_eq!(unfold_solve(&ctx, &a, &[ctx.monomial(2).unwrap()]).unwrap(), Solution::Inconsistent);
    }

    #[test]
    fn unfold_recovers_planted_rank_one_coefficients() {
        let ctx = FieldContext::with_default_modulus(2, 20).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..20 {
            let eps = ctx.random_nonzero(&mut rng);
            let h: Vec<_> = (0..5).map(|_| ctx.random_element(&mut rng)).collect();
            let lambda: Vec<u8> = (0..5).map(|_| rand::Rng::gen_range(&mut rng, 0..2)).collect();
            let s = h.iter().zip(&lambda).fold(ctx.zero(), |acc, (hj, &l)| {
                ctx.add(&acc, &ctx.scale_prime(l, &ctx.mul(hj, &eps)))
            });
            let coeffs = MatrixFqm::from_rows(vec![h.iter().map(|hj| ctx.mul(hj, &eps)).collect()]).unwrap();
            assert_eq!(unfold_solve(&ctx, &coeffs, &[s]).unwrap(), Solution::Unique(lambda));
        }
    }
}
