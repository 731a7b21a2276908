use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use rowlrpc::config::Settings;
use rowlrpc::experiments::{
    overlap_failure_stats, report, run_trials, theorem1_probe, zero_syndrome_stats, ReportFormat, TrialConfig,
};
use rowlrpc::format;
use rowlrpc::oracle::{oracle_check, OraclePreset};
use rowlrpc_core::channel::sample_error;
use rowlrpc_core::codes::{sample_lrpc, sample_row_lrpc, theorem1_construction};
use rowlrpc_core::decoder::{decode, DecodeStatus, DecoderConfig};
use rowlrpc_core::{EnumerationBudget, FieldContext};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "rowlrpc", version, about = "Row-LRPC rank-metric codes: generation, decoding, simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a code and write it in the code file format.
    Gen(GenArgs),
    /// Sample an error of rank r for a code and write its syndrome.
    Plant(PlantArgs),
    /// Decode a syndrome. Exit status 0 on success, 2 on a decoding failure.
    Decode(DecodeArgs),
    /// Monte Carlo decoding trials; prints a CSV or JSON report.
    Simulate(SimArgs),
    /// Zero-syndrome and overlapping-space statistics for a trial config.
    FailureStats(SimArgs),
    /// Minimum weight of T·H over random invertible T for two-block codes.
    ProbeTheorem1(ProbeArgs),
    /// Compare decoder supports with the exhaustive oracle.
    OracleCheck(OracleArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    rho: Option<usize>,
    /// row-lrpc, lrpc or theorem1
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlantArgs {
    #[arg(long)]
    code: PathBuf,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Syndrome output (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the planted error vector here.
    #[arg(long)]
    error_out: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    code: PathBuf,
    #[arg(long)]
    syndrome: PathBuf,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value_t = DecoderConfig::default().max_sets)]
    max_sets: usize,
    #[arg(long)]
    allow_overlap: bool,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    rho: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_sets: Option<usize>,
    /// Leading parity check rows given to the decoder (default n-k).
    #[arg(long)]
    rows_used: Option<usize>,
    #[arg(long)]
    allow_overlap: bool,
    /// csv or json
    #[arg(long)]
    format: Option<ReportFormat>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report wall_time as 0 so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct ProbeArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    rho: Option<usize>,
    /// Random transforms per code.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of codes.
    #[arg(long)]
    codes: Option<usize>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

fn load_settings(path: &Option<PathBuf>) -> Result<Settings> {
    match path {
        None => Ok(Settings::default()),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Settings::parse(&text).with_context(|| format!("parsing {}", p.display()))
        }
    }
}

fn required<T: std::str::FromStr>(s: &Settings, flag: Option<T>, key: &str) -> Result<T> {
    s.pick(flag, key)?.ok_or_else(|| anyhow!("missing --{key} (flag or config entry)"))
}

fn flag(s: &Settings, flag: bool, key: &str) -> Result<bool> {
    Ok(flag || s.get::<bool>(key)?.unwrap_or(false))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn gen(a: GenArgs) -> Result<ExitCode> {
    let s = load_settings(&a.config)?;
    let ctx = FieldContext::with_default_modulus(required(&s, a.q, "q")?, required(&s, a.m, "m")?)?;
    let (n, k, rho) = (required(&s, a.n, "n")?, required(&s, a.k, "k")?, required(&s, a.rho, "rho")?);
    let mut rng = ChaCha8Rng::seed_from_u64(s.pick(a.seed, "seed")?.unwrap_or(0));
    let kind = s.pick(a.kind, "kind")?.unwrap_or_else(|| "row-lrpc".into());
    let code = match kind.as_str() {
        "row-lrpc" => sample_row_lrpc(&ctx, n, k, rho, &mut rng)?,
        "lrpc" => sample_lrpc(&ctx, n, k, rho, &mut rng)?,
        "theorem1" => theorem1_construction(&ctx, n, k, rho, &mut rng)?,
        other => bail!("unknown kind {other:?} (expected row-lrpc, lrpc or theorem1)"),
    };
    emit(&a.out, &format::code_to_string(&code))?;
    Ok(ExitCode::SUCCESS)
}

fn plant(a: PlantArgs) -> Result<ExitCode> {
    let code = format::parse_code(&read(&a.code)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let err = sample_error(code.ctx(), code.n(), a.r, &mut rng)?;
    let s = code.syndrome(&err.e)?;
    emit(&a.out, &format!("{}\n", format::vector_to_string(&s)))?;
    if let Some(p) = &a.error_out {
        fs::write(p, format!("{}\n", format::vector_to_string(&err.e)))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn decode_cmd(a: DecodeArgs) -> Result<ExitCode> {
    let code = format::parse_code(&read(&a.code)?)?;
    let s = format::parse_vector(code.ctx(), &read(&a.syndrome)?)?;
    let cfg = DecoderConfig { max_sets: a.max_sets, allow_overlap: a.allow_overlap, budget: EnumerationBudget::default() };
    let out = decode(&code, &s, a.r, &cfg)?;
    if out.dimension_warning {
        eprintln!("warning: k = {} exceeds the dimension bound for r = {}", code.k(), a.r);
    }
    println!("status: {}", out.status);
    println!("sets_intersected: {}", out.sets_intersected);
    if let Some(sup) = &out.support_found {
        println!("support:");
        print!("{}", format::subspace_to_string(sup));
    }
    if let Some(err) = &out.error {
        println!("error:");
        println!("{}", format::vector_to_string(&err.e));
    }
    Ok(if out.status == DecodeStatus::Success { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn trial_config(a: &SimArgs, s: &Settings) -> Result<TrialConfig> {
    let mut cfg = TrialConfig::new(
        required(s, a.q, "q")?,
        required(s, a.m, "m")?,
        required(s, a.n, "n")?,
        required(s, a.k, "k")?,
        required(s, a.rho, "rho")?,
        required(s, a.r, "r")?,
        required(s, a.trials, "trials")?,
        required(s, a.seed, "seed")?,
    );
    if let Some(v) = s.pick(a.max_sets, "max-sets")? {
        cfg.max_sets = v;
    }
    if let Some(v) = s.pick(a.rows_used, "rows-used")? {
        cfg.rows_used = v;
    }
    cfg.allow_overlap = flag(s, a.allow_overlap, "allow-overlap")?;
    cfg.validate()?;
    Ok(cfg)
}

fn simulate(a: SimArgs) -> Result<ExitCode> {
    let s = load_settings(&a.config)?;
    let cfg = trial_config(&a, &s)?;
    let fmt = s.pick(a.format, "format").map_err(|e| anyhow!(e))?.unwrap_or(ReportFormat::Csv);
    let mut stats = run_trials(&cfg)?;
    if flag(&s, a.no_timing, "no-timing")? {
        stats.wall_time = 0.0;
    }
    let out = s.pick(a.out.clone(), "out")?;
    emit(&out, &report(&stats, fmt))?;
    Ok(ExitCode::SUCCESS)
}

fn failure_stats(a: SimArgs) -> Result<ExitCode> {
    let s = load_settings(&a.config)?;
    let cfg = trial_config(&a, &s)?;
    let z = zero_syndrome_stats(&cfg)?;
    println!(
        "zero syndrome rows: {}/{} observed {:.6} predicted {:.6} (sigma {:.6})",
        z.zero_rows, z.rows_observed, z.observed_rate, z.predicted_rate, z.sigma
    );
    for (t, (p, o)) in z.predicted_at_least.iter().zip(&z.observed_at_least).enumerate() {
        println!("at least {} nonzero rows: predicted {:.6} observed {:.6}", t + 1, p, o);
    }
    let o = overlap_failure_stats(&cfg)?;
    println!(
        "nontrivial pair intersections: {}/{} ({:.6}); flagged trials {}/{}",
        o.nontrivial_pairs,
        o.pairs_checked,
        o.pair_rate(),
        o.flagged_trials,
        o.trials
    );
    for status in DecodeStatus::ALL {
        println!(
            "{:<32} flagged {:.4} unflagged {:.4}",
            status.name(),
            o.rate_given(true, status),
            o.rate_given(false, status)
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn probe(a: ProbeArgs) -> Result<ExitCode> {
    let s = load_settings(&a.config)?;
    let rho = required(&s, a.rho, "rho")?;
    let rep = theorem1_probe(
        required(&s, a.q, "q")?,
        required(&s, a.m, "m")?,
        required(&s, a.n, "n")?,
        required(&s, a.k, "k")?,
        rho,
        s.pick(a.codes, "codes")?.unwrap_or(1),
        required(&s, a.trials, "trials")?,
        required(&s, a.seed, "seed")?,
    )?;
    for (i, w) in rep.min_weights.iter().enumerate() {
        println!("code {i}: min weight {w}");
    }
    let ok = rep.min_weight() > rho;
    println!("probes: {} min weight: {} above rho: {}", rep.probes(), rep.min_weight(), ok);
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn oracle(a: OracleArgs) -> Result<ExitCode> {
    let s = load_settings(&a.config)?;
    let name = s.pick(a.preset, "preset")?.unwrap_or_else(|| "tiny".into());
    let preset = OraclePreset::by_name(&name).ok_or_else(|| anyhow!("unknown preset {name:?}"))?;
    let rep = oracle_check(preset, s.pick(a.trials, "trials")?.unwrap_or(200), s.pick(a.seed, "seed")?.unwrap_or(0))?;
    println!("trials: {}", rep.trials);
    println!("candidate supports: {}", rep.candidates);
    println!("unique admissible: {}", rep.unique);
    println!("decoder successes: {}", rep.decoder_successes);
    println!("agreements: {}", rep.agreements);
    println!("unique support inside candidate span: {}", rep.unique_in_candidate_span);
    println!("contradictions: {}", rep.contradictions);
    println!("planted not admissible: {}", rep.planted_missing);
    Ok(if rep.contradictions == 0 && rep.planted_missing == 0 { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Plant(a) => plant(a),
        Command::Decode(a) => decode_cmd(a),
        Command::Simulate(a) => simulate(a),
        Command::FailureStats(a) => failure_stats(a),
        Command::ProbeTheorem1(a) => probe(a),
        Command::OracleCheck(a) => oracle(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
