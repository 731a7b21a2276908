//! Support-recovery decoder for row-LRPC codes.
//!
//! Writing the error as `e_j = Σ_l λ_{j,l} ε_l` over a basis `ε_1..ε_r` of
//! its support, each syndrome equation becomes `Σ_l h'_{i,l} ε_l = s_i`
//! with `h'_{i,l}` in the row support `H_i`. Dividing rows with `s_i ≠ 0` by
//! `s_i` gives `Σ_l a_{i,l} ε_l = 1` with `a_{i,l} ∈ A_i = s_i^{-1} H_i`.
//!
//! * For `r = 1` every `A_i` contains `ε^{-1}`, and intersecting them
//!   usually leaves exactly `F_q ε^{-1}`.
//! * For `r ≥ 2`, picking `r` rows `I` and enumerating every configuration
//!   of the `r × r` matrix `(a_{i,l})` with entries from the `A_i`, the
//!   Cramer solutions of the all-ones system form a candidate set `B_I`
//!   that contains the support. Intersecting a few `B_I` narrows it down.
//!
//! Once a support is known the error is rebuilt by expanding the syndrome
//! equations over `F_q` and solving for the `λ_{j,l}`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::channel::ErrorPattern;
use crate::codes::RowLrpcCode;
use crate::field::{FieldContext, FieldElement};
use crate::linalg::{rank_weight, unfold_solve, MatrixFqm, Solution, VectorFqm};
use crate::subspace::{EnumerationBudget, Subspace};
use crate::{Error, Result};

/// Syndrome equations after dividing each nonzero row by its syndrome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedSystem {
    /// `A_i = s_i^{-1} H_i` when `s_i ≠ 0`, else `H_i`.
    pub spaces: Vec<Subspace>,
    /// `1` when `s_i ≠ 0`, else `0`.
    pub rhs_bits: Vec<u8>,
    pub original_syndrome: VectorFqm,
}

impl NormalizedSystem {
    /// Rows with a nonzero syndrome.
    pub fn usable_rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.rhs_bits.iter().enumerate().filter(|(_, &b)| b == 1).map(|(i, _)| i)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DecodeStatus {
    Success,
    InsufficientNonzeroSyndromes,
    SupportNotRecovered,
    PartialSupport,
    ReconstructionInconsistent,
    ReconstructionAmbiguous,
}

impl DecodeStatus {
    pub const ALL: [DecodeStatus; 6] = [
        DecodeStatus::Success,
        DecodeStatus::InsufficientNonzeroSyndromes,
        DecodeStatus::SupportNotRecovered,
        DecodeStatus::PartialSupport,
        DecodeStatus::ReconstructionInconsistent,
        DecodeStatus::ReconstructionAmbiguous,
    ];

    pub const FAILURES: [DecodeStatus; 5] = [
        DecodeStatus::InsufficientNonzeroSyndromes,
        DecodeStatus::SupportNotRecovered,
        DecodeStatus::PartialSupport,
        DecodeStatus::ReconstructionInconsistent,
        DecodeStatus::ReconstructionAmbiguous,
    ];

    /// Snake-case name used in reports.
    pub fn name(self) -> &'static str {
        match self {
            DecodeStatus::Success => "success",
            DecodeStatus::InsufficientNonzeroSyndromes => "insufficient_nonzero_syndromes",
            DecodeStatus::SupportNotRecovered => "support_not_recovered",
            DecodeStatus::PartialSupport => "partial_support",
            DecodeStatus::ReconstructionInconsistent => "reconstruction_inconsistent",
            DecodeStatus::ReconstructionAmbiguous => "reconstruction_ambiguous",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }
}

impl fmt::Display for DecodeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Cramer solutions `B_I` for one index set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSet {
    pub indices: Vec<usize>,
    /// Nonzero solution coordinates over all invertible configurations.
    pub elements: BTreeSet<FieldElement>,
    /// Number of configurations enumerated, `Π_{i∈I} |A_i|^r`.
    pub configurations: u64,
    /// How many of them were invertible.
    pub invertible: u64,
}

/// One enumerated configuration of the `r × r` Cramer system.
pub struct Configuration<'a> {
    /// Row-major `r × r` matrix `(a_{i,l})`.
    pub entries: &'a [FieldElement],
    pub det: FieldElement,
    /// `det` of the matrix with column `l` replaced by all ones.
    pub numerators: &'a [FieldElement],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecoderConfig {
    /// Maximum number of candidate sets to intersect.
    pub max_sets: usize,
    /// Fill remaining slots with overlapping index sets once no further
    /// disjoint set exists.
    pub allow_overlap: bool,
    pub budget: EnumerationBudget,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig { max_sets: 4, allow_overlap: false, budget: EnumerationBudget::default() }
    }
}

/// Result of the support-recovery stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSearch {
    /// The recovered support, or the failure status.
    pub result: core::result::Result<Subspace, DecodeStatus>,
    /// Span of the final intersection (also set on failure when one exists).
    pub candidate_span: Option<Subspace>,
    pub sets_intersected: usize,
    pub index_sets: Vec<Vec<usize>>,
}

impl SupportSearch {
    fn failed(status: DecodeStatus) -> Self {
        SupportSearch { result: Err(status), candidate_span: None, sets_intersected: 0, index_sets: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    pub error: Option<ErrorPattern>,
    pub support_found: Option<Subspace>,
    pub sets_intersected: usize,
    pub index_sets: Vec<Vec<usize>>,
    /// Set when `k` exceeds [`feasibility_bound`].
    pub dimension_warning: bool,
}

/// Largest `k` for which two disjoint index sets exist and the expanded
/// reconstruction system has at least as many equations as unknowns:
/// `min(n - 2r, n - ⌈nr/m⌉)`. `None` when negative.
pub fn feasibility_bound(n: usize, m: usize, r: usize) -> Option<usize> {
    let a = n.checked_sub(2 * r)?;
    let b = n.checked_sub((n * r).div_ceil(m))?;
    Some(a.min(b))
}

/// Builds the normalized system `A_i`, `v_i` from a syndrome.
pub fn normalize(code: &RowLrpcCode, s: &[FieldElement]) -> Result<NormalizedSystem> {
    let ctx = code.ctx();
    if s.len() != code.n() - code.k() {
        return Err(Error::ShapeMismatch);
    }
    let mut spaces = Vec::with_capacity(s.len());
    let mut rhs_bits = Vec::with_capacity(s.len());
    for (si, hi) in s.iter().zip(code.row_supports()) {
        ctx.check(si)?;
        if si.is_zero() {
            spaces.push(hi.clone());
            rhs_bits.push(0);
        } else {
            spaces.push(hi.scale(ctx, &ctx.inv(si)?)?);
            rhs_bits.push(1);
        }
    }
    Ok(NormalizedSystem { spaces, rhs_bits, original_syndrome: s.to_vec() })
}

/// Rank-one support recovery: intersect the `A_i` of nonzero rows until a
/// line `F_q w` remains; the support is then `F_q w^{-1}`.
pub fn recover_support_rank1(ctx: &FieldContext, sys: &NormalizedSystem) -> SupportSearch {
    let mut rows = sys.usable_rows();
    let Some(first) = rows.next() else {
        return SupportSearch::failed(DecodeStatus::InsufficientNonzeroSyndromes);
    };
    let mut running = sys.spaces[first].clone();
    let mut used = vec![first];
    for i in rows {
        if running.dim() <= 1 {
            break;
        }
        running = running.intersect(ctx, &sys.spaces[i]);
        used.push(i);
    }
    let sets_intersected = used.len();
    let index_sets = used.into_iter().map(|i| vec![i]).collect();
    let result = if running.dim() == 1 {
        let w = ctx.inv(&running.basis()[0]).expect("basis vector is nonzero");
        Ok(Subspace::span_iter(ctx, [w]))
    } else {
        Err(DecodeStatus::SupportNotRecovered)
    };
    SupportSearch { result, candidate_span: Some(running), sets_intersected, index_sets }
}

/// `det` and the column-replacement determinants of a small square matrix
/// by cofactor expansion: with cofactors `C`, `det = Σ_t a_{t,0} C_{t,0}`
/// and replacing column `l` by ones gives `Σ_t C_{t,l}`.
fn cramer_parts(ctx: &FieldContext, a: &[FieldElement], r: usize, numerators: &mut [FieldElement]) -> FieldElement {
    if r == 1 {
        numerators[0] = ctx.one();
        return a[0];
    }
    let mut minor = [ctx.zero(); 16];
    let mut det = ctx.zero();
    for l in 0..r {
        let mut acc = ctx.zero();
        for t in 0..r {
            let mut w = 0;
            for i in (0..r).filter(|&i| i != t) {
                for j in (0..r).filter(|&j| j != l) {
                    minor[w] = a[i * r + j];
                    w += 1;
                }
            }
            let mut c = laplace_det(ctx, &minor[..w], r - 1);
            if (t + l) % 2 == 1 {
                c = ctx.neg(&c);
            }
            if l == 0 {
                det = ctx.add(&det, &ctx.mul(&a[t * r], &c));
            }
            acc = ctx.add(&acc, &c);
        }
        numerators[l] = acc;
    }
    det
}

fn laplace_det(ctx: &FieldContext, a: &[FieldElement], n: usize) -> FieldElement {
    match n {
        1 => a[0],
        2 => ctx.sub(&ctx.mul(&a[0], &a[3]), &ctx.mul(&a[1], &a[2])),
        _ => {
            let mut minor = [ctx.zero(); 9];
            let mut det = ctx.zero();
            for t in 0..n {
                if a[t * n].is_zero() {
                    continue;
                }
                let mut w = 0;
                for i in (0..n).filter(|&i| i != t) {
                    for j in 1..n {
                        minor[w] = a[i * n + j];
                        w += 1;
                    }
                }
                let mut term = ctx.mul(&a[t * n], &laplace_det(ctx, &minor[..w], n - 1));
                if t % 2 == 1 {
                    term = ctx.neg(&term);
                }
                det = ctx.add(&det, &term);
            }
            det
        }
    }
}

/// Largest `r` handled by cofactor expansion; bigger systems use elimination.
const COFACTOR_MAX: usize = 4;

/// Visits every configuration of the `|I| × |I|` system for index set `I`.
/// Row `t` of the matrix takes all its entries from `A_{I[t]}`.
pub fn for_each_configuration<F>(
    ctx: &FieldContext,
    sys: &NormalizedSystem,
    indices: &[usize],
    budget: EnumerationBudget,
    mut visit: F,
) -> Result<u64>
where
    F: FnMut(&Configuration<'_>),
{
    let r = indices.len();
    if r == 0 {
        return Err(Error::InvalidParameters("empty index set"));
    }
    for (pos, &i) in indices.iter().enumerate() {
        if i >= sys.spaces.len() || sys.rhs_bits[i] != 1 {
            return Err(Error::InvalidParameters("index set must use rows with nonzero syndrome"));
        }
        if indices[..pos].contains(&i) {
            return Err(Error::InvalidParameters("index set has repeated rows"));
        }
    }
    let exponent: usize = indices.iter().map(|&i| r * sys.spaces[i].dim()).sum();
    let total = budget.admit(ctx.q(), exponent as u32)?;
    let row_elements: Vec<Vec<FieldElement>> =
        indices.iter().map(|&i| sys.spaces[i].enumerate(ctx, budget)).collect::<Result<_>>()?;
    let radix: Vec<usize> = (0..r * r).map(|c| row_elements[c / r].len()).collect();
    let mut digits = vec![0usize; r * r];
    let mut entries: Vec<FieldElement> = (0..r * r).map(|c| row_elements[c / r][0]).collect();
    let mut numerators = vec![ctx.zero(); r];
    let ones = vec![ctx.one(); r];
    for _ in 0..total {
        let det = if r <= COFACTOR_MAX {
            cramer_parts(ctx, &entries, r, &mut numerators)
        } else {
            let m = MatrixFqm::from_entries(r, r, entries.clone())?;
            let det = m.det(ctx)?;
            if let Solution::Unique(x) = m.solve(ctx, &ones)? {
                for (n, xi) in numerators.iter_mut().zip(&x) {
                    *n = ctx.mul(xi, &det);
                }
            }
            det
        };
        visit(&Configuration { entries: &entries, det, numerators: &numerators });
        for c in 0..r * r {
            digits[c] += 1;
            if digits[c] < radix[c] {
                entries[c] = row_elements[c / r][digits[c]];
                break;
            }
            digits[c] = 0;
            entries[c] = row_elements[c / r][0];
        }
    }
    Ok(total)
}

/// `B_I`: every nonzero coordinate of the Cramer solution of
/// `A_{I} · ε = 1` over all invertible configurations.
pub fn candidate_set(
    ctx: &FieldContext,
    sys: &NormalizedSystem,
    indices: &[usize],
    budget: EnumerationBudget,
) -> Result<CandidateSet> {
    let mut elements = BTreeSet::new();
    let mut inverses: BTreeMap<FieldElement, FieldElement> = BTreeMap::new();
    let mut invertible = 0u64;
    let configurations = for_each_configuration(ctx, sys, indices, budget, |cfg| {
        if cfg.det.is_zero() {
            return;
        }
        invertible += 1;
        let inv = *inverses.entry(cfg.det).or_insert_with(|| ctx.inv(&cfg.det).expect("nonzero"));
        for num in cfg.numerators {
            if !num.is_zero() {
                elements.insert(ctx.mul(num, &inv));
            }
        }
    })?;
    Ok(CandidateSet { indices: indices.to_vec(), elements, configurations, invertible })
}

/// Search node cap for [`select_index_sets`].
const SELECTION_NODE_LIMIT: usize = 20_000;

/// Chooses up to `max_sets` index sets of size `r` among the rows with a
/// nonzero syndrome. Pairwise-disjoint sets come first, as many as
/// possible, preferring sets whose spaces meet pairwise only in zero. With
/// `allow_overlap` the remaining slots are then filled with overlapping
/// sets.
pub fn select_index_sets(
    ctx: &FieldContext,
    sys: &NormalizedSystem,
    r: usize,
    max_sets: usize,
    allow_overlap: bool,
) -> core::result::Result<Vec<Vec<usize>>, DecodeStatus> {
    let usable: Vec<usize> = sys.usable_rows().collect();
    if r == 0 || usable.len() < r {
        return Err(DecodeStatus::InsufficientNonzeroSyndromes);
    }
    let u = usable.len();
    let mut trivial = vec![vec![true; u]; u];
    for a in 0..u {
        for b in a + 1..u {
            let meet = sys.spaces[usable[a]].intersect(ctx, &sys.spaces[usable[b]]);
            trivial[a][b] = meet.is_zero();
            trivial[b][a] = trivial[a][b];
        }
    }
    // all r-subsets of positions into `usable`, clean ones first
    let mut subsets: Vec<(Vec<usize>, bool)> = combinations(u, r)
        .map(|c| {
            let clean = c.iter().enumerate().all(|(x, &a)| c[x + 1..].iter().all(|&b| trivial[a][b]));
            (c, clean)
        })
        .collect();
    subsets.sort_by_key(|(_, clean)| !clean);

    let target = max_sets.min(u / r);
    let mut search = DisjointSearch {
        subsets: &subsets,
        target,
        best: Vec::new(),
        best_clean: 0,
        nodes: 0,
        used: vec![false; u],
        stack: Vec::new(),
    };
    search.run(0, 0);
    let mut chosen: Vec<usize> = search.best;

    for (idx, _) in subsets.iter().enumerate() {
        if !allow_overlap || chosen.len() >= max_sets {
            break;
        }
        if !chosen.contains(&idx) {
            chosen.push(idx);
        }
    }
    Ok(chosen.into_iter().map(|idx| subsets[idx].0.iter().map(|&p| usable[p]).collect()).collect())
}

struct DisjointSearch<'a> {
    subsets: &'a [(Vec<usize>, bool)],
    target: usize,
    best: Vec<usize>,
    best_clean: usize,
    nodes: usize,
    used: Vec<bool>,
    stack: Vec<usize>,
}

impl DisjointSearch<'_> {
    fn done(&self) -> bool {
        (self.best.len() == self.target && self.best_clean == self.target) || self.nodes >= SELECTION_NODE_LIMIT
    }

    fn run(&mut self, from: usize, clean: usize) {
        self.nodes += 1;
        if (self.stack.len(), clean) > (self.best.len(), self.best_clean) {
            self.best = self.stack.clone();
            self.best_clean = clean;
        }
        if self.stack.len() == self.target || self.done() {
            return;
        }
        for idx in from..self.subsets.len() {
            let (set, is_clean) = &self.subsets[idx];
            if set.iter().any(|&p| self.used[p]) {
                continue;
            }
            for &p in set {
                self.used[p] = true;
            }
            self.stack.push(idx);
            self.run(idx + 1, clean + usize::from(*is_clean));
            self.stack.pop();
            for &p in set {
                self.used[p] = false;
            }
            if self.done() {
                return;
            }
        }
    }
}

/// Lexicographic `r`-subsets of `0..n`.
fn combinations(n: usize, r: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = if r <= n { Some((0..r).collect()) } else { None };
    core::iter::from_fn(move || {
        let out = cur.clone()?;
        let c = cur.as_mut().expect("present");
        let mut i = r;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if c[i] < n - r + i {
                c[i] += 1;
                for j in i + 1..r {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

/// Recovers the error support from candidate sets. Sets are intersected in
/// order; after each one the span of the surviving elements is taken and
/// the search stops once it has dimension `r`.
pub fn recover_support(
    ctx: &FieldContext,
    sys: &NormalizedSystem,
    r: usize,
    cfg: &DecoderConfig,
) -> Result<SupportSearch> {
    if r == 0 {
        return Err(Error::InvalidParameters("r must be positive"));
    }
    if r == 1 {
        return Ok(recover_support_rank1(ctx, sys));
    }
    let index_sets = match select_index_sets(ctx, sys, r, cfg.max_sets, cfg.allow_overlap) {
        Ok(sets) => sets,
        Err(status) => return Ok(SupportSearch::failed(status)),
    };
    let mut running: Option<BTreeSet<FieldElement>> = None;
    let mut span = Subspace::zero();
    let mut sets_intersected = 0;
    for indices in &index_sets {
        let b = candidate_set(ctx, sys, indices, cfg.budget)?;
        let next = match running.take() {
            None => b.elements,
            Some(prev) => prev.intersection(&b.elements).copied().collect(),
        };
        sets_intersected += 1;
        span = Subspace::span_iter(ctx, next.iter().copied());
        running = Some(next);
        if span.dim() <= r {
            break;
        }
    }
    let result = match span.dim() {
        d if d == r => Ok(span.clone()),
        0 => Err(DecodeStatus::SupportNotRecovered),
        d if d < r => Err(DecodeStatus::PartialSupport),
        _ => Err(DecodeStatus::SupportNotRecovered),
    };
    Ok(SupportSearch { result, candidate_span: Some(span), sets_intersected, index_sets })
}

/// Rebuilds the error from a support by solving the syndrome equations
/// over `F_q` for the coordinates `λ_{j,l}` of `e_j = Σ_l λ_{j,l} ε_l`.
/// Rows with a zero syndrome take part here too.
pub fn reconstruct_error(
    code: &RowLrpcCode,
    s: &[FieldElement],
    support: &Subspace,
) -> Result<core::result::Result<ErrorPattern, DecodeStatus>> {
    let ctx = code.ctx();
    let (n, rows) = (code.n(), code.n() - code.k());
    if s.len() != rows {
        return Err(Error::ShapeMismatch);
    }
    let eps = support.basis();
    let r = eps.len();
    if r == 0 {
        return Err(Error::InvalidParameters("support must be nonzero"));
    }
    let h = code.parity_check();
    let mut coeffs = MatrixFqm::zeros(ctx, rows, n * r);
    for i in 0..rows {
        for j in 0..n {
            for (l, e) in eps.iter().enumerate() {
                coeffs.set(i, j * r + l, ctx.mul(h.get(i, j), e));
            }
        }
    }
    match unfold_solve(ctx, &coeffs, s)? {
        Solution::Unique(lambda) => {
            let e: VectorFqm = (0..n)
                .map(|j| {
                    eps.iter().enumerate().fold(ctx.zero(), |acc, (l, el)| {
                        ctx.add(&acc, &ctx.scale_prime(lambda[j * r + l], el))
                    })
                })
                .collect();
            debug_assert_eq!(code.syndrome(&e)?, s);
            debug_assert!(rank_weight(ctx, &e) <= r);
            Ok(Ok(ErrorPattern::from_vector(ctx, e)))
        }
        Solution::Inconsistent => Ok(Err(DecodeStatus::ReconstructionInconsistent)),
        Solution::Underdetermined { .. } => Ok(Err(DecodeStatus::ReconstructionAmbiguous)),
    }
}

/// Full pipeline: normalize, recover the support, rebuild the error.
/// A rebuilt error whose rank is below `r` is reported as
/// [`DecodeStatus::ReconstructionInconsistent`].
pub fn decode(code: &RowLrpcCode, s: &[FieldElement], r: usize, cfg: &DecoderConfig) -> Result<DecodeOutcome> {
    if r == 0 {
        return Err(Error::InvalidParameters("r must be positive"));
    }
    let ctx = code.ctx();
    let dimension_warning = feasibility_bound(code.n(), ctx.m(), r).map_or(true, |b| code.k() > b);
    let sys = normalize(code, s)?;
    let search = recover_support(ctx, &sys, r, cfg)?;
    let mut outcome = DecodeOutcome {
        status: DecodeStatus::SupportNotRecovered,
        error: None,
        support_found: search.candidate_span.clone(),
        sets_intersected: search.sets_intersected,
        index_sets: search.index_sets,
        dimension_warning,
    };
    let support = match search.result {
        Ok(support) => support,
        Err(status) => {
            outcome.status = status;
            return Ok(outcome);
        }
    };
    outcome.support_found = Some(support.clone());
    match reconstruct_error(code, s, &support)? {
        Ok(err) if err.r == r => {
            outcome.status = DecodeStatus::Success;
            outcome.error = Some(err);
        }
        Ok(_) => outcome.status = DecodeStatus::ReconstructionInconsistent,
        Err(status) => outcome.status = status,
    }
    Ok(outcome)
}
