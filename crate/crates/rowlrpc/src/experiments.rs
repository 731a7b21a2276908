//! Seeded Monte Carlo trials of the decoder.
//!
//! Trial `i` draws all of its randomness from a ChaCha8 generator seeded
//! with the master seed and switched to stream `i`, so results do not
//! depend on how trials are scheduled across threads.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use rowlrpc_core::channel::sample_error;
use rowlrpc_core::codes::{sample_row_lrpc, theorem1_construction, weight_probe, RowLrpcCode};
use rowlrpc_core::decoder::{decode, normalize, DecodeStatus, DecoderConfig, NormalizedSystem};
use rowlrpc_core::{EnumerationBudget, FieldContext, MatrixFqm};

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] rowlrpc_core::Error),
}

pub type Result<T> = std::result::Result<T, ExperimentError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialConfig {
    pub q: u32,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub rho: usize,
    pub r: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_sets: usize,
    /// Leading parity check rows handed to the decoder.
    pub rows_used: usize,
    pub allow_overlap: bool,
}

impl TrialConfig {
    /// Defaults `max_sets = 4`, `rows_used = n - k`, no overlapping sets.
    pub fn new(q: u32, m: usize, n: usize, k: usize, rho: usize, r: usize, trials: usize, seed: u64) -> Self {
        TrialConfig {
            q,
            m,
            n,
            k,
            rho,
            r,
            trials,
            seed,
            max_sets: DecoderConfig::default().max_sets,
            rows_used: n.saturating_sub(k),
            allow_overlap: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |s: &str| Err(ExperimentError::Config(s.to_string()));
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.k >= self.n {
            return bad("need k < n");
        }
        if self.rho == 0 || self.rho > self.m {
            return bad("need 1 <= rho <= m");
        }
        if self.r == 0 || self.r > self.n.min(self.m) {
            return bad("need 1 <= r <= min(n, m)");
        }
        if self.rows_used == 0 || self.rows_used > self.n - self.k {
            return bad("need 1 <= rows_used <= n - k");
        }
        if self.max_sets == 0 {
            return bad("max_sets must be positive");
        }
        FieldContext::with_default_modulus(self.q, self.m)?;
        Ok(())
    }

    pub fn context(&self) -> Result<FieldContext> {
        Ok(FieldContext::with_default_modulus(self.q, self.m)?)
    }

    pub fn decoder_config(&self) -> DecoderConfig {
        DecoderConfig { max_sets: self.max_sets, allow_overlap: self.allow_overlap, budget: EnumerationBudget::default() }
    }
}

/// Generator for trial `index`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// What one trial produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub status: DecodeStatus,
    /// The decoder's support equals the planted one.
    pub support_recovered: bool,
    pub zero_rows: usize,
    pub sets_intersected: usize,
    /// Distinct row pairs among the rows used in the index sets.
    pub pairs_checked: usize,
    /// Those pairs whose normalized spaces meet nontrivially.
    pub nontrivial_pairs: usize,
}

impl TrialOutcome {
    pub fn overlap(&self) -> bool {
        self.nontrivial_pairs > 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialStats {
    pub config: TrialConfig,
    pub successes: u64,
    pub failure_counts: BTreeMap<DecodeStatus, u64>,
    /// Trials where the recovered support equals the planted one,
    /// whether or not the error itself could be rebuilt.
    pub support_recovered: u64,
    pub zero_syndrome_rows_total: u64,
    pub rows_observed: u64,
    pub mean_sets_intersected: f64,
    pub wall_time: f64,
}

impl TrialStats {
    pub fn trials(&self) -> u64 {
        self.successes + self.failure_counts.values().sum::<u64>()
    }

    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.trials() as f64
    }

    pub fn support_rate(&self) -> f64 {
        self.support_recovered as f64 / self.trials() as f64
    }

    pub fn zero_rate(&self) -> f64 {
        self.zero_syndrome_rows_total as f64 / self.rows_observed as f64
    }
}

/// The code seen by the decoder: the first `rows_used` rows of `code`.
fn restrict(code: &RowLrpcCode, rows_used: usize) -> Result<RowLrpcCode> {
    let full = code.n() - code.k();
    if rows_used == full {
        return Ok(code.clone());
    }
    let h = code.parity_check();
    let rows = (0..rows_used).map(|i| h.row(i).to_vec()).collect();
    Ok(RowLrpcCode::new(
        code.ctx(),
        code.n(),
        code.n() - rows_used,
        code.rho(),
        MatrixFqm::from_rows(rows)?,
        code.row_supports()[..rows_used].to_vec(),
    )?)
}

/// Whether any two distinct rows appearing in `index_sets` have normalized
/// spaces meeting nontrivially; returns `(pairs checked, nontrivial pairs)`.
pub fn overlap_pairs(ctx: &FieldContext, sys: &NormalizedSystem, index_sets: &[Vec<usize>]) -> (usize, usize) {
    let mut rows: Vec<usize> = index_sets.iter().flatten().copied().collect();
    rows.sort_unstable();
    rows.dedup();
    let mut pairs = 0;
    let mut hits = 0;
    for (x, &a) in rows.iter().enumerate() {
        for &b in &rows[x + 1..] {
            pairs += 1;
            if !sys.spaces[a].intersect(ctx, &sys.spaces[b]).is_zero() {
                hits += 1;
            }
        }
    }
    (pairs, hits)
}

/// Runs trial `index`: fresh code, fresh error, decode.
pub fn run_one(cfg: &TrialConfig, ctx: &FieldContext, index: u64) -> Result<TrialOutcome> {
    let mut rng = trial_rng(cfg.seed, index);
    let code = sample_row_lrpc(ctx, cfg.n, cfg.k, cfg.rho, &mut rng)?;
    let err = sample_error(ctx, cfg.n, cfg.r, &mut rng)?;
    let seen = restrict(&code, cfg.rows_used)?;
    let s = seen.syndrome(&err.e)?;
    let zero_rows = s.iter().filter(|x| x.is_zero()).count();
    let out = decode(&seen, &s, cfg.r, &cfg.decoder_config())?;
    let sys = normalize(&seen, &s)?;
    let (pairs_checked, nontrivial_pairs) = overlap_pairs(ctx, &sys, &out.index_sets);
    Ok(TrialOutcome {
        status: out.status,
        support_recovered: out.support_found.as_ref() == Some(&err.support),
        zero_rows,
        sets_intersected: out.sets_intersected,
        pairs_checked,
        nontrivial_pairs,
    })
}

fn run_all(cfg: &TrialConfig) -> Result<Vec<TrialOutcome>> {
    cfg.validate()?;
    let ctx = cfg.context()?;
    (0..cfg.trials as u64).into_par_iter().map(|i| run_one(cfg, &ctx, i)).collect()
}

fn tally(cfg: &TrialConfig, outcomes: &[TrialOutcome], wall_time: f64) -> TrialStats {
    let mut failure_counts: BTreeMap<DecodeStatus, u64> = DecodeStatus::FAILURES.iter().map(|&s| (s, 0)).collect();
    let mut successes = 0;
    let mut support_recovered = 0;
    let mut zero_rows = 0;
    let mut sets = 0;
    for o in outcomes {
        match o.status {
            DecodeStatus::Success => successes += 1,
            s => *failure_counts.entry(s).or_default() += 1,
        }
        support_recovered += u64::from(o.support_recovered);
        zero_rows += o.zero_rows as u64;
        sets += o.sets_intersected as u64;
    }
    TrialStats {
        config: cfg.clone(),
        successes,
        failure_counts,
        support_recovered,
        zero_syndrome_rows_total: zero_rows,
        rows_observed: (outcomes.len() * cfg.rows_used) as u64,
        mean_sets_intersected: sets as f64 / outcomes.len() as f64,
        wall_time,
    }
}

pub fn run_trials(cfg: &TrialConfig) -> Result<TrialStats> {
    let start = Instant::now();
    let outcomes = run_all(cfg)?;
    Ok(tally(cfg, &outcomes, start.elapsed().as_secs_f64()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSyndromeStats {
    pub rows_observed: u64,
    pub zero_rows: u64,
    pub observed_rate: f64,
    /// `q^{-r·rho}`.
    pub predicted_rate: f64,
    /// Binomial standard deviation of the observed rate under the prediction.
    pub sigma: f64,
    /// Entry `t - 1`: predicted probability of at least `t` nonzero rows.
    pub predicted_at_least: Vec<f64>,
    /// Entry `t - 1`: observed fraction of trials with at least `t` nonzero rows.
    pub observed_at_least: Vec<f64>,
}

/// `P(s_i = 0) = q^{-r·rho}` per row, independent across rows.
pub fn predicted_zero_rate(q: u32, r: usize, rho: usize) -> f64 {
    (q as f64).powi(-((r * rho) as i32))
}

/// `Σ_{i=t}^{rows} C(rows, i) (1-p)^i p^{rows-i}` for `t = 1..=rows`.
pub fn predicted_at_least(p: f64, rows: usize) -> Vec<f64> {
    let pmf: Vec<f64> = (0..=rows).map(|i| binomial(rows, i) * (1.0 - p).powi(i as i32) * p.powi((rows - i) as i32)).collect();
    (1..=rows).map(|t| pmf[t..].iter().sum()).collect()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Samples code, error and syndrome per trial (no decoding) and counts
/// zero syndrome rows among the rows the decoder would see.
pub fn zero_syndrome_stats(cfg: &TrialConfig) -> Result<ZeroSyndromeStats> {
    cfg.validate()?;
    let ctx = cfg.context()?;
    let per_trial: Vec<usize> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(cfg.seed, i);
            let code = sample_row_lrpc(&ctx, cfg.n, cfg.k, cfg.rho, &mut rng)?;
            let err = sample_error(&ctx, cfg.n, cfg.r, &mut rng)?;
            let s = code.syndrome(&err.e)?;
            Ok(s[..cfg.rows_used].iter().filter(|x| x.is_zero()).count())
        })
        .collect::<Result<_>>()?;
    let rows = cfg.rows_used;
    let rows_observed = (cfg.trials * rows) as u64;
    let zero_rows: u64 = per_trial.iter().map(|&z| z as u64).sum();
    let p = predicted_zero_rate(cfg.q, cfg.r, cfg.rho);
    let observed_at_least = (1..=rows)
        .map(|t| per_trial.iter().filter(|&&z| rows - z >= t).count() as f64 / cfg.trials as f64)
        .collect();
    Ok(ZeroSyndromeStats {
        rows_observed,
        zero_rows,
        observed_rate: zero_rows as f64 / rows_observed as f64,
        predicted_rate: p,
        sigma: (p * (1.0 - p) / rows_observed as f64).sqrt(),
        predicted_at_least: predicted_at_least(p, rows),
        observed_at_least,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct OverlapStats {
    pub trials: u64,
    /// Trials where some used pair of spaces meets nontrivially.
    pub flagged_trials: u64,
    pub pairs_checked: u64,
    pub nontrivial_pairs: u64,
    /// `(flagged, status) → count`.
    pub table: BTreeMap<(bool, DecodeStatus), u64>,
}

impl OverlapStats {
    pub fn pair_rate(&self) -> f64 {
        if self.pairs_checked == 0 {
            0.0
        } else {
            self.nontrivial_pairs as f64 / self.pairs_checked as f64
        }
    }

    /// Fraction of trials in the `flagged` group ending in `status`.
    pub fn rate_given(&self, flagged: bool, status: DecodeStatus) -> f64 {
        let group: u64 = self.table.iter().filter(|((f, _), _)| *f == flagged).map(|(_, c)| c).sum();
        if group == 0 {
            return 0.0;
        }
        self.table.get(&(flagged, status)).copied().unwrap_or(0) as f64 / group as f64
    }
}

/// Cross-tabulates nontrivial intersections among the rows used for
/// support recovery against the decode status.
pub fn overlap_failure_stats(cfg: &TrialConfig) -> Result<OverlapStats> {
    let outcomes = run_all(cfg)?;
    let mut stats = OverlapStats {
        trials: outcomes.len() as u64,
        flagged_trials: 0,
        pairs_checked: 0,
        nontrivial_pairs: 0,
        table: BTreeMap::new(),
    };
    for o in outcomes {
        stats.pairs_checked += o.pairs_checked as u64;
        stats.nontrivial_pairs += o.nontrivial_pairs as u64;
        stats.flagged_trials += u64::from(o.overlap());
        *stats.table.entry((o.overlap(), o.status)).or_default() += 1;
    }
    Ok(stats)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    /// Minimum `matrix_weight(T·H)` seen for each code.
    pub min_weights: Vec<usize>,
    pub probes_per_code: usize,
}

impl ProbeReport {
    pub fn min_weight(&self) -> usize {
        self.min_weights.iter().copied().min().unwrap_or(usize::MAX)
    }

    pub fn probes(&self) -> usize {
        self.min_weights.len() * self.probes_per_code
    }
}

/// Samples `codes` codes from the two-block construction and, for each,
/// `probes` random invertible transforms `T`, recording the least weight
/// of `T·H`. Code `i` uses stream `i` of `seed`.
pub fn theorem1_probe(
    q: u32,
    m: usize,
    n: usize,
    k: usize,
    rho: usize,
    codes: usize,
    probes: usize,
    seed: u64,
) -> Result<ProbeReport> {
    let ctx = FieldContext::with_default_modulus(q, m)?;
    let min_weights = (0..codes as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let code = theorem1_construction(&ctx, n, k, rho, &mut rng)?;
            Ok(weight_probe(&code, probes, &mut rng))
        })
        .collect::<Result<_>>()?;
    Ok(ProbeReport { min_weights, probes_per_code: probes })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

/// CSV header matching [`report`].
pub fn csv_header() -> String {
    let mut cols = vec!["q", "m", "n", "k", "rho", "r", "trials", "seed", "successes"];
    cols.extend(DecodeStatus::FAILURES.iter().map(|s| s.name()));
    cols.extend(["zero_rate", "mean_sets", "wall_time", "support_recovered"]);
    cols.join(",")
}

/// Renders stats as a CSV table (header plus one row) or a JSON object.
pub fn report(stats: &TrialStats, format: ReportFormat) -> String {
    let c = &stats.config;
    match format {
        ReportFormat::Csv => {
            let mut fields = vec![
                c.q.to_string(),
                c.m.to_string(),
                c.n.to_string(),
                c.k.to_string(),
                c.rho.to_string(),
                c.r.to_string(),
                stats.trials().to_string(),
                c.seed.to_string(),
                stats.successes.to_string(),
            ];
            fields.extend(DecodeStatus::FAILURES.iter().map(|s| stats.failure_counts.get(s).copied().unwrap_or(0).to_string()));
            fields.push(format!("{:.6}", stats.zero_rate()));
            fields.push(format!("{:.4}", stats.mean_sets_intersected));
            fields.push(format!("{:.3}", stats.wall_time));
            fields.push(stats.support_recovered.to_string());
            format!("{}\n{}\n", csv_header(), fields.join(","))
        }
        ReportFormat::Json => {
            let mut row = serde_json::Map::new();
            let mut put = |k: &str, v: serde_json::Value| {
                row.insert(k.to_string(), v);
            };
            put("q", c.q.into());
            put("m", c.m.into());
            put("n", c.n.into());
            put("k", c.k.into());
            put("rho", c.rho.into());
            put("r", c.r.into());
            put("trials", stats.trials().into());
            put("seed", c.seed.into());
            put("successes", stats.successes.into());
            for st in DecodeStatus::FAILURES {
                put(st.name(), stats.failure_counts.get(&st).copied().unwrap_or(0).into());
            }
            put("zero_rate", stats.zero_rate().into());
            put("mean_sets", stats.mean_sets_intersected.into());
            put("wall_time", stats.wall_time.into());
            put("support_recovered", stats.support_recovered.into());
            let mut s = serde_json::to_string_pretty(&row).expect("plain values serialize");
            s.push('\n');
            s
        }
    }
}
