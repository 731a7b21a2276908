//! Error vectors of exact rank weight.

use rand::Rng;

use crate::codes::RESAMPLE_BUDGET;
use crate::field::{FieldContext, FieldElement};
use crate::linalg::{support, VectorFqm};
use crate::subspace::Subspace;
use crate::{Error, Result};

/// An error vector together with its support `span(e)` of dimension `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorPattern {
    pub e: VectorFqm,
    pub support: Subspace,
    pub r: usize,
}

impl ErrorPattern {
    /// Builds the pattern for `e`, taking its support from the entries.
    pub fn from_vector(ctx: &FieldContext, e: VectorFqm) -> Self {
        let support = support(ctx, &e);
        let r = support.dim();
        ErrorPattern { e, support, r }
    }
}

/// Draws a random `r`-dimensional support and `n` entries uniformly from
/// it, resampling the entries until they span the whole support.
pub fn sample_error<R: Rng + ?Sized>(ctx: &FieldContext, n: usize, r: usize, rng: &mut R) -> Result<ErrorPattern> {
    if r == 0 || r > n || r > ctx.m() {
        return Err(Error::InvalidParameters("need 1 <= r <= min(n, m)"));
    }
    let sup = Subspace::random(ctx, r, rng)?;
    for _ in 0..RESAMPLE_BUDGET {
        let e: VectorFqm = (0..n).map(|_| sup.random_element(ctx, rng)).collect();
        if support(ctx, &e) == sup {
            return Ok(ErrorPattern { e, support: sup, r });
        }
    }
    Err(Error::ConstructionFailed)
}

/// Entrywise sum `c + e`.
pub fn apply(ctx: &FieldContext, codeword: &[FieldElement], err: &ErrorPattern) -> Result<VectorFqm> {
    if codeword.len() != err.e.len() {
        return Err(Error::ShapeMismatch);
    }
    Ok(codeword.iter().zip(&err.e).map(|(c, e)| ctx.add(c, e)).collect())
}
