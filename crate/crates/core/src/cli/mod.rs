//! The `genbound` command line: `example`, `check`, `mi` and `sweep`.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
//! Parallelism comes from `--threads`, overridden by `GENBOUND_THREADS`;
//! results never depend on it.

mod config;
mod output;

pub use config::{parse_config, AcceptanceSection, RunConfig};
pub use output::{OutputDir, RunManifest};

use crate::conditions::{eta_c_scan, CgfSource, ConditionReport};
use crate::error::{Error, Result};
use crate::learning::{LearningTuple, ModelId};
use crate::mc::{reproduce_example, run_criterion, run_sweep, ExampleId, OutputFlags, ReproOptions, SweepConfig, Verdict};
use crate::mi::{chain_rule_mi, closed_form_mi, correlated_gaussian, histogram_mi, ksg_mi, mixed_mi, MiEstimate, Points};
use crate::models::train;
use crate::rng::RngStream;
use clap::{Args, Parser, Subcommand, ValueEnum};
use output::{digest_of, unix_now};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// `println!` that tolerates a closed stdout (for example when piped into `head`).
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

pub const THREADS_ENV: &str = "GENBOUND_THREADS";

#[derive(Debug, Parser)]
#[command(name = "genbound", version, about = "Information-theoretic generalization bounds and fast-rate conditions")]
pub struct Cli {
    /// Worker threads (default: available cores). GENBOUND_THREADS overrides.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Mirror every CSV output as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reproduce one worked example: curves, fits and verdicts.
    Example(ExampleArgs),
    /// Check the (η,c)-central condition over a grid of η.
    Check(CheckArgs),
    /// Estimate mutual information.
    Mi(MiArgs),
    /// Run a Monte-Carlo sweep from a TOML config.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct ExampleArgs {
    /// One of example_2, example_3, example_5_6, sec_5_1, sec_5_2, sec_5_3, example_7, example_8.
    #[arg(value_parser = parse_example)]
    pub id: ExampleId,
    #[arg(long, default_value_t = ReproOptions::default().seed)]
    pub seed: u64,
    /// Repetitions for the Monte-Carlo parts (default: each check's own count).
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum SourceArg {
    Closed,
    Mc,
}

#[derive(Debug, Args, Serialize)]
pub struct CheckArgs {
    #[arg(value_parser = parse_model)]
    pub model: ModelId,
    /// `start:stop:count` (inclusive, evenly spaced) or a comma list.
    #[arg(long, value_parser = parse_eta_grid)]
    pub eta_grid: EtaGrid,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = SourceArg::Closed)]
    pub source: SourceArg,
    /// Repetitions for `--source mc`.
    #[arg(long, default_value_t = 500)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Override the model's noise standard deviation.
    #[arg(long)]
    pub noise_sd: Option<f64>,
    /// Override the model's mean parameter.
    #[arg(long)]
    pub mean: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtaGrid(pub Vec<f64>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum EstimatorArg {
    ClosedForm,
    Ksg,
    Mixed,
    Histogram,
    ChainRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum GeneratorArg {
    CorrelatedGaussian,
}

#[derive(Debug, Args, Serialize)]
pub struct MiArgs {
    #[arg(long, value_enum)]
    pub estimator: EstimatorArg,
    /// Model whose (W, Z_1) pairs are estimated (closed form or simulated).
    #[arg(long, value_parser = parse_model, conflicts_with_all = ["data", "generator"])]
    pub model: Option<ModelId>,
    /// Numeric CSV; the first `--x-cols` columns are one variable, the rest the other.
    #[arg(long, conflicts_with = "generator")]
    pub data: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub generator: Option<GeneratorArg>,
    /// Correlation of the Gaussian generator.
    #[arg(long, default_value_t = 0.0)]
    pub rho: f64,
    /// Points drawn from the generator, or training runs for `--model`.
    #[arg(long, default_value_t = 5000)]
    pub samples: usize,
    /// Training-set size for `--model`.
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = crate::mi::DEFAULT_K)]
    pub k: usize,
    #[arg(long, default_value_t = 16)]
    pub bins: usize,
    #[arg(long, default_value_t = 1)]
    pub x_cols: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also report values in bits.
    #[arg(long)]
    pub bits: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

fn parse_example(s: &str) -> std::result::Result<ExampleId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_model(s: &str) -> std::result::Result<ModelId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_eta_grid(s: &str) -> std::result::Result<EtaGrid, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [a, b, k] => {
            let (a, b) = (num(a)?, num(b)?);
            let k: usize = k.trim().parse().map_err(|_| format!("count must be an integer: {k:?}"))?;
            match k {
                0 => return Err("count must be >= 1".into()),
                1 => vec![a],
                _ => (0..k).map(|i| a + (b - a) * i as f64 / (k - 1) as f64).collect(),
            }
        }
        [list] => list.split(',').map(num).collect::<std::result::Result<_, _>>()?,
        _ => return Err("expected start:stop:count or a comma-separated list".into()),
    };
    if grid.iter().any(|e: &f64| !(*e > 0.0 && e.is_finite())) {
        return Err("eta values must be finite and > 0".into());
    }
    Ok(EtaGrid(grid))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) | Error::Config(_) | Error::Unsupported { .. } | Error::Domain { .. } => 2,
        Error::Runtime(_) | Error::Io(_) => 1,
    }
}

/// Thread count from the environment, then the flag.
pub fn thread_count(flag: Option<usize>) -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t > 0)
            .map(Some)
            .ok_or_else(|| Error::InvalidInput(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => match flag {
            Some(0) => Err(Error::InvalidInput("--threads must be >= 1".into())),
            other => Ok(other),
        },
    }
}

pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let threads = thread_count(cli.threads)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        pool = pool.num_threads(t);
    }
    let pool = pool.build().map_err(|e| Error::Runtime(e.to_string()))?;
    let json = cli.json;
    pool.install(|| match cli.command {
        Command::Example(a) => cmd_example(&a, json),
        Command::Check(a) => cmd_check(&a),
        Command::Mi(a) => cmd_mi(&a),
        Command::Sweep(a) => cmd_sweep(&a, json),
    })
}

fn print_verdicts<'a>(verdicts: impl IntoIterator<Item = &'a Verdict>) {
    for v in verdicts {
        say!("{}", v.line());
        for d in &v.details {
            say!("    {d}");
        }
    }
}

pub fn cmd_example(a: &ExampleArgs, json: bool) -> Result<()> {
    let started = unix_now();
    let opts = ReproOptions { seed: a.seed, reps: a.reps };
    let bundle = reproduce_example(a.id, &opts)?;
    let mut out = OutputDir::create(&a.out, a.id.name(), json)?;
    out.table("curves", &bundle.curves)?;
    for t in &bundle.tables {
        out.table(&t.name, t)?;
    }
    out.json("verdicts", &bundle.verdicts_json())?;
    let digest = digest_of(&json!({"example": a.id.name(), "seed": a.seed, "reps": a.reps}));
    let files = out.finish(digest, a.seed, started)?;
    print_verdicts(&bundle.verdicts);
    say!("wrote {} files to {}", files.len(), a.out.display());
    Ok(())
}

fn tuple_for(model: ModelId, noise_sd: Option<f64>, mean: Option<f64>) -> Result<LearningTuple> {
    let mut t = LearningTuple::with_defaults(model);
    t.params.noise_sd = noise_sd.unwrap_or(t.params.noise_sd);
    t.params.mean = mean.unwrap_or(t.params.mean);
    t.validate()?;
    Ok(t)
}

pub fn check_reports(a: &CheckArgs) -> Result<Vec<ConditionReport>> {
    let tuple = tuple_for(a.model, a.noise_sd, a.mean)?;
    match a.source {
        SourceArg::Closed => eta_c_scan(CgfSource::ClosedForm { tuple: &tuple, n: a.n }, &a.eta_grid.0),
        SourceArg::Mc => {
            let mut cfg = SweepConfig::new(tuple);
            cfg.n_grid = vec![a.n];
            cfg.repetitions = a.reps;
            cfg.master_seed = a.seed;
            cfg.eta_grid = a.eta_grid.0.clone();
            cfg.outputs = OutputFlags {
                cgf: true,
                mi: false,
                bounds: false,
            };
            let mut res = run_sweep(&cfg)?;
            Ok(std::mem::take(&mut res.rows[0].cgf))
        }
    }
}

fn cmd_check(a: &CheckArgs) -> Result<()> {
    let reports = check_reports(a)?;
    let doc = json!({"model": a.model, "n": a.n, "source": a.source, "reports": reports});
    say!("{}", serde_json::to_string_pretty(&doc).expect("json"));
    Ok(())
}

/// Row-major numeric matrix split into a left block of `left` columns and the rest.
struct Columns {
    rows: usize,
    left: Vec<f64>,
    right: Vec<f64>,
    left_dim: usize,
    right_dim: usize,
}

fn read_csv(path: &Path, x_cols: usize) -> Result<Columns> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: std::result::Result<Vec<f64>, _> = line.split(',').map(|c| c.trim().parse::<f64>()).collect();
        match cells {
            Ok(r) => rows.push(r),
            // A non-numeric first line is a header.
            Err(_) if rows.is_empty() && i == 0 => continue,
            Err(_) => {
                return Err(Error::InvalidInput(format!("{}:{}: non-numeric value", path.display(), i + 1)));
            }
        }
    }
    let width = rows.first().map_or(0, Vec::len);
    if width <= x_cols || x_cols == 0 {
        return Err(Error::InvalidInput(format!(
            "{} needs more than --x-cols = {x_cols} columns, found {width}",
            path.display()
        )));
    }
    if let Some(i) = rows.iter().position(|r| r.len() != width) {
        return Err(Error::InvalidInput(format!("{}: row {} has a different width", path.display(), i + 1)));
    }
    let mut c = Columns {
        rows: rows.len(),
        left: Vec::new(),
        right: Vec::new(),
        left_dim: x_cols,
        right_dim: width - x_cols,
    };
    for r in rows {
        c.left.extend_from_slice(&r[..x_cols]);
        c.right.extend_from_slice(&r[x_cols..]);
    }
    Ok(c)
}

/// `(W, Z_1)` pairs from independent training runs.
fn model_pairs(tuple: &LearningTuple, n: usize, runs: usize, seed: u64) -> Result<Columns> {
    let draws: Vec<(Vec<f64>, Vec<f64>)> = (0..runs as u64)
        .into_par_iter()
        .map(|r| {
            let (draw, _) = train(tuple, n, RngStream::new(seed, r))?;
            Ok((draw.hypothesis, draw.dataset.sample(0).to_vec()))
        })
        .collect::<Result<_>>()?;
    let (left_dim, right_dim) = (tuple.hypothesis_dim(), tuple.sample_arity());
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for (w, z) in draws {
        left.extend(w);
        right.extend(z);
    }
    Ok(Columns { rows: runs, left, right, left_dim, right_dim })
}

fn labels(values: &[f64], what: &str) -> Result<Vec<i64>> {
    values
        .iter()
        .map(|&v| {
            if v.fract() == 0.0 && v.abs() < 1e15 {
                Ok(v as i64)
            } else {
                Err(Error::InvalidInput(format!("{what} must be integer-valued, found {v}")))
            }
        })
        .collect()
}

fn estimate(c: &Columns, a: &MiArgs) -> Result<MiEstimate> {
    match a.estimator {
        EstimatorArg::Ksg => ksg_mi(Points::new(&c.left, c.left_dim)?, Points::new(&c.right, c.right_dim)?, a.k),
        EstimatorArg::Histogram => {
            if c.left_dim != 1 || c.right_dim != 1 {
                return Err(Error::InvalidInput("the histogram estimator needs two scalar variables".into()));
            }
            histogram_mi(&c.left, &c.right, (a.bins, a.bins))
        }
        EstimatorArg::Mixed => {
            if c.left_dim != 1 {
                return Err(Error::InvalidInput("the mixed estimator needs one discrete column first".into()));
            }
            mixed_mi(&labels(&c.left, "the discrete column")?, Points::new(&c.right, c.right_dim)?, a.k)
        }
        EstimatorArg::ChainRule => {
            if c.right_dim < 2 {
                return Err(Error::InvalidInput(
                    "the chain-rule estimator needs feature columns followed by a 0/1 label column".into(),
                ));
            }
            let d = c.right_dim - 1;
            let mut x = Vec::with_capacity(c.rows * d);
            let mut y = Vec::with_capacity(c.rows);
            for row in c.right.chunks_exact(c.right_dim) {
                x.extend_from_slice(&row[..d]);
                y.push(row[d]);
            }
            chain_rule_mi(Points::new(&c.left, c.left_dim)?, Points::new(&x, d)?, &labels(&y, "the label column")?, a.k)
        }
        EstimatorArg::ClosedForm => unreachable!("handled by the caller"),
    }
}

pub fn mi_estimate(a: &MiArgs) -> Result<Value> {
    if a.estimator == EstimatorArg::ClosedForm {
        let model = a
            .model
            .ok_or_else(|| Error::InvalidInput("--estimator closed-form needs --model".into()))?;
        let est = closed_form_mi(&LearningTuple::with_defaults(model), a.n)?;
        let all_equal = est.windows(2).all(|w| w[0].value == w[1].value);
        return Ok(if all_equal {
            serde_json::to_value(&est[0])
        } else {
            serde_json::to_value(&est)
        }
        .expect("json"));
    }
    let columns = match (&a.model, &a.data, &a.generator) {
        (Some(m), _, _) => {
            if a.samples < 2 {
                return Err(Error::InvalidInput("--samples must be >= 2".into()));
            }
            model_pairs(&LearningTuple::with_defaults(*m), a.n, a.samples, a.seed)?
        }
        (None, Some(path), _) => read_csv(path, a.x_cols)?,
        (None, None, Some(GeneratorArg::CorrelatedGaussian)) => {
            if !(a.rho.abs() < 1.0) {
                return Err(Error::InvalidInput(format!("--rho must lie in (-1, 1), got {}", a.rho)));
            }
            let (x, y) = correlated_gaussian(a.samples, a.rho, RngStream::new(a.seed, 0));
            Columns { rows: a.samples, left: x, right: y, left_dim: 1, right_dim: 1 }
        }
        (None, None, None) => {
            return Err(Error::InvalidInput("one of --model, --data or --generator is required".into()));
        }
    };
    let mut est = estimate(&columns, a)?;
    if a.data.is_none() {
        est = est.with_seed(a.seed);
    }
    Ok(serde_json::to_value(&est).expect("json"))
}

/// Adds `value_bits` next to every `value` in nats.
fn add_bits(v: &mut Value) {
    match v {
        Value::Array(items) => items.iter_mut().for_each(add_bits),
        Value::Object(m) => {
            if let Some(nats) = m.get("value").and_then(Value::as_f64) {
                m.insert("value_bits".into(), json!(crate::special::nats_to_bits(nats)));
            }
        }
        _ => {}
    }
}

fn cmd_mi(a: &MiArgs) -> Result<()> {
    let mut v = mi_estimate(a)?;
    if a.bits {
        add_bits(&mut v);
    }
    say!("{}", serde_json::to_string_pretty(&v).expect("json"));
    Ok(())
}

fn cmd_sweep(a: &SweepArgs, json: bool) -> Result<()> {
    let started = unix_now();
    let origin = a.config.display().to_string();
    let src = std::fs::read_to_string(&a.config).map_err(|e| Error::Config(format!("cannot read {origin}: {e}")))?;
    let cfg = parse_config(&src, &origin)?;
    let res = run_sweep(&cfg.sweep)?;
    let mut out = OutputDir::create(&a.out, &cfg.name, json)?;
    out.table("summary", &res.summary_table())?;
    if cfg.sweep.outputs.cgf {
        out.table("cgf", &res.cgf_table())?;
    }
    let acc = &cfg.acceptance;
    if !acc.criteria.is_empty() || !acc.examples.is_empty() {
        let opts = ReproOptions {
            seed: cfg.sweep.master_seed,
            reps: acc.reps,
        };
        let mut verdicts = Vec::new();
        for &c in &acc.criteria {
            verdicts.push(run_criterion(c, &opts)?.verdict);
        }
        let mut examples = Vec::new();
        for &id in &acc.examples {
            examples.push(reproduce_example(id, &opts)?.verdicts_json());
        }
        print_verdicts(&verdicts);
        let passed = verdicts.iter().all(|v| v.passed);
        out.json(
            "verdicts",
            &json!({"passed": passed, "criteria": verdicts, "examples": examples}),
        )?;
    }
    let files = out.finish(cfg.digest(), cfg.sweep.master_seed, started)?;
    say!("{} rows; wrote {} files to {}", res.rows.len(), files.len(), a.out.display());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_grid_forms() {
        assert_eq!(parse_eta_grid("0.05:0.25:5").unwrap().0.len(), 5);
        let g = parse_eta_grid("0.05:0.25:5").unwrap().0;
        assert!((g[1] - 0.1).abs() < 1e-15 && g[4] == 0.25);
        assert_eq!(parse_eta_grid("0.8").unwrap().0, vec![0.8]);
        assert_eq!(parse_eta_grid("0.1,0.5").unwrap().0, vec![0.1, 0.5]);
        assert!(parse_eta_grid("0:1:3").is_err());
        assert!(parse_eta_grid("a:b").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(exit_code(&Error::Config("x".into())), 2);
        assert_eq!(exit_code(&Error::Runtime("x".into())), 1);
    }
}
