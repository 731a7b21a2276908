//! Exhaustive support oracle for tiny parameters.
//!
//! Every `r`-dimensional subspace `E` of `F_{q^m}` is tried as a support:
//! `E` is admissible when some `e ∈ E^n` with `span(e) = E` has the given
//! syndrome. The decoder may only report supports from this set.

use std::collections::BTreeSet;

use rowlrpc_core::channel::sample_error;
use rowlrpc_core::codes::{sample_row_lrpc, RowLrpcCode};
use rowlrpc_core::decoder::{decode, DecodeStatus, DecoderConfig};
use rowlrpc_core::linalg::{rank_weight, unfold_solve, Solution};
use rowlrpc_core::{FieldContext, FieldElement, MatrixFqm, Subspace};

use crate::experiments::trial_rng;

/// Largest affine solution space searched for a full-rank member.
const MAX_KERNEL_DIM: usize = 12;

/// All `d`-dimensional subspaces, as spans of `d`-tuples of field elements.
pub fn all_subspaces(ctx: &FieldContext, d: usize) -> BTreeSet<Subspace> {
    let elems: Vec<FieldElement> = ctx.elements().filter(|e| !e.is_zero()).collect();
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; d];
    if d == 0 {
        out.insert(Subspace::zero());
        return out;
    }
    loop {
        let picked: Vec<FieldElement> = idx.iter().map(|&i| elems[i]).collect();
        let v = Subspace::span(ctx, &picked).expect("same context");
        if v.dim() == d {
            out.insert(v);
        }
        let mut t = 0;
        loop {
            if t == d {
                return out;
            }
            idx[t] += 1;
            if idx[t] < elems.len() {
                break;
            }
            idx[t] = 0;
            t += 1;
        }
    }
}

/// Whether some error with support exactly `support` has syndrome `s`.
pub fn admits(code: &RowLrpcCode, s: &[FieldElement], support: &Subspace) -> bool {
    let ctx = code.ctx();
    let eps = support.basis();
    let (n, r) = (code.n(), eps.len());
    let h = code.parity_check();
    let mut coeffs = MatrixFqm::zeros(ctx, h.rows(), n * r);
    for i in 0..h.rows() {
        for j in 0..n {
            for (l, e) in eps.iter().enumerate() {
                coeffs.set(i, j * r + l, ctx.mul(h.get(i, j), e));
            }
        }
    }
    let q = ctx.q() as u8;
    let build = |lambda: &[u8]| -> Vec<FieldElement> {
        (0..n)
            .map(|j| {
                eps.iter()
                    .enumerate()
                    .fold(ctx.zero(), |acc, (l, el)| ctx.add(&acc, &ctx.scale_prime(lambda[j * r + l], el)))
            })
            .collect()
    };
    match unfold_solve(ctx, &coeffs, s).expect("shapes agree") {
        Solution::Inconsistent => false,
        Solution::Unique(lambda) => rank_weight(ctx, &build(&lambda)) == r,
        Solution::Underdetermined { particular, kernel } => {
            assert!(kernel.len() <= MAX_KERNEL_DIM, "oracle search space too large");
            let mut coeff = vec![0u8; kernel.len()];
            loop {
                let mut lambda = particular.clone();
                for (c, kv) in coeff.iter().zip(&kernel) {
                    for (x, y) in lambda.iter_mut().zip(kv) {
                        *x = ((*x as u32 + *c as u32 * *y as u32) % q as u32) as u8;
                    }
                }
                if rank_weight(ctx, &build(&lambda)) == r {
                    return true;
                }
                let mut t = 0;
                loop {
                    if t == coeff.len() {
                        return false;
                    }
                    coeff[t] += 1;
                    if coeff[t] < q {
                        break;
                    }
                    coeff[t] = 0;
                    t += 1;
                }
            }
        }
    }
}

pub fn admissible_supports(code: &RowLrpcCode, s: &[FieldElement], candidates: &BTreeSet<Subspace>) -> Vec<Subspace> {
    candidates.iter().filter(|v| admits(code, s, v)).cloned().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OraclePreset {
    pub q: u32,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub rho: usize,
    pub r: usize,
}

impl OraclePreset {
    pub const TINY: OraclePreset = OraclePreset { q: 2, m: 6, n: 6, k: 2, rho: 2, r: 2 };

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "tiny" => Some(Self::TINY),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleReport {
    pub trials: u64,
    /// Number of candidate subspaces searched per trial.
    pub candidates: usize,
    /// Trials with exactly one admissible support.
    pub unique: u64,
    pub decoder_successes: u64,
    /// Decoder successes on trials with a unique admissible support.
    pub agreements: u64,
    /// Trials with a unique admissible support contained in the span of the
    /// decoder's final candidate set.
    pub unique_in_candidate_span: u64,
    /// Decoder successes reporting a support outside the admissible set,
    /// or different from the unique one.
    pub contradictions: u64,
    /// Trials where the planted support was not admissible (never expected).
    pub planted_missing: u64,
}

/// Plants `trials` errors and compares decoder outcomes with the oracle.
pub fn oracle_check(preset: OraclePreset, trials: u64, seed: u64) -> rowlrpc_core::Result<OracleReport> {
    let ctx = FieldContext::with_default_modulus(preset.q, preset.m)?;
    let candidates = all_subspaces(&ctx, preset.r);
    let mut report = OracleReport { trials, candidates: candidates.len(), ..Default::default() };
    for i in 0..trials {
        let mut rng = trial_rng(seed, i);
        let code = sample_row_lrpc(&ctx, preset.n, preset.k, preset.rho, &mut rng)?;
        let err = sample_error(&ctx, preset.n, preset.r, &mut rng)?;
        let s = code.syndrome(&err.e)?;
        let admissible = admissible_supports(&code, &s, &candidates);
        if !admissible.contains(&err.support) {
            report.planted_missing += 1;
        }
        let unique = admissible.len() == 1;
        report.unique += u64::from(unique);
        let out = decode(&code, &s, preset.r, &DecoderConfig::default())?;
        if let (true, Some(span)) = (unique, &out.support_found) {
            report.unique_in_candidate_span += u64::from(admissible[0].is_subspace_of(&ctx, span));
        }
        if out.status != DecodeStatus::Success {
            continue;
        }
        report.decoder_successes += 1;
        let found = out.support_found.expect("success carries a support");
        if !admissible.contains(&found) || (unique && admissible[0] != found) {
            report.contradictions += 1;
        } else if unique {
            report.agreements += 1;
        }
    }
    Ok(report)
}
