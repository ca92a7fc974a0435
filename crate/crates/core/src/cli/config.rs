//! TOML run configuration with strict keys and line-precise diagnostics.
//!
//! ```toml
//! name = "gaussian_small"        # output prefix, default "sweep"
//! model = "gaussian_mean"
//! n_grid = [50, 100]
//! repetitions = 100
//! master_seed = 7                # default 0
//! eta_grid = [0.1, 0.25]         # empirical CGF checks
//! bound_eta = 0.125              # η of the (η,c) bound curves
//! # bound_c, test_set_size, probe_points, bootstrap_resamples are optional
//!
//! [params]                       # any subset of the model parameters
//! noise_sd = 1.0
//!
//! [estimator]
//! k = 3
//! bins = 16
//!
//! [outputs]
//! cgf = true
//! mi = true
//! bounds = true
//!
//! [acceptance]                   # optional verdicts emitted after the sweep
//! criteria = [1, 2, 3]
//! examples = ["example_2"]
//! reps = 1000                    # overrides criterion repetition counts
//! ```

use crate::error::{Error, Result};
use crate::learning::{LabelConvention, LearningTuple, ModelId};
use crate::mc::{ExampleId, SweepConfig, CRITERIA};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeSet;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamOverrides {
    mean: Option<f64>,
    noise_sd: Option<f64>,
    design: Option<Vec<f64>>,
    dim: Option<usize>,
    w_star: Option<Vec<f64>>,
    hypothesis_radius: Option<f64>,
    reg_coeff: Option<f64>,
    reg_bound: Option<f64>,
    label_convention: Option<LabelConvention>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct EstimatorOverrides {
    k: Option<usize>,
    bins: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputOverrides {
    cgf: Option<bool>,
    mi: Option<bool>,
    bounds: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AcceptanceSection {
    #[serde(default)]
    pub criteria: Vec<u8>,
    #[serde(default)]
    pub examples: Vec<ExampleId>,
    pub reps: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    name: Option<String>,
    model: ModelId,
    n_grid: Vec<usize>,
    repetitions: usize,
    master_seed: Option<u64>,
    eta_grid: Option<Vec<f64>>,
    bound_eta: Option<f64>,
    bound_c: Option<f64>,
    test_set_size: Option<usize>,
    probe_points: Option<usize>,
    bootstrap_resamples: Option<usize>,
    params: Option<ParamOverrides>,
    estimator: Option<EstimatorOverrides>,
    outputs: Option<OutputOverrides>,
    acceptance: Option<AcceptanceSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub name: String,
    pub sweep: SweepConfig,
    pub acceptance: AcceptanceSection,
}

impl RunConfig {
    /// SHA-256 of the canonical JSON form of the resolved configuration.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        hex(&Sha256::digest(canonical.as_bytes()))
    }
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// 1-based line and column of a byte offset.
fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

/// Line of the first top-level or table assignment to `key`.
fn key_line(src: &str, key: &str) -> Option<usize> {
    src.lines().position(|l| {
        let l = l.trim_start();
        l.strip_prefix(key)
            .is_some_and(|rest| rest.trim_start().starts_with('='))
    })
    .map(|i| i + 1)
}

fn field_error(src: &str, origin: &str, key: &str, msg: impl std::fmt::Display) -> Error {
    match key_line(src, key) {
        Some(line) => Error::Config(format!("{origin}:{line}: field `{key}`: {msg}")),
        None => Error::Config(format!("{origin}: field `{key}`: {msg}")),
    }
}

pub fn parse_config(src: &str, origin: &str) -> Result<RunConfig> {
    let file: ConfigFile = toml::from_str(src).map_err(|e| {
        let msg = e.message().trim().to_string();
        match e.span() {
            Some(span) => {
                let (line, col) = line_col(src, span.start);
                Error::Config(format!("{origin}:{line}:{col}: {msg}"))
            }
            None => Error::Config(format!("{origin}: {msg}")),
        }
    })?;

    let mut seen = BTreeSet::new();
    if let Some(dup) = file.n_grid.iter().find(|n| !seen.insert(**n)) {
        return Err(field_error(src, origin, "n_grid", format!("duplicate sample size {dup}")));
    }

    let mut model = LearningTuple::with_defaults(file.model);
    if let Some(p) = file.params {
        let q = &mut model.params;
        q.mean = p.mean.unwrap_or(q.mean);
        q.noise_sd = p.noise_sd.unwrap_or(q.noise_sd);
        q.design = p.design.unwrap_or(std::mem::take(&mut q.design));
        q.dim = p.dim.unwrap_or(q.dim);
        q.w_star = p.w_star.unwrap_or(std::mem::take(&mut q.w_star));
        q.hypothesis_radius = p.hypothesis_radius.unwrap_or(q.hypothesis_radius);
        q.reg_coeff = p.reg_coeff.unwrap_or(q.reg_coeff);
        q.reg_bound = p.reg_bound.unwrap_or(q.reg_bound);
        q.label_convention = p.label_convention.unwrap_or(q.label_convention);
    }
    model
        .validate()
        .map_err(|e| Error::Config(format!("{origin}: [params]: {e}")))?;

    let mut sweep = SweepConfig::new(model);
    sweep.n_grid = file.n_grid;
    sweep.repetitions = file.repetitions;
    sweep.master_seed = file.master_seed.unwrap_or(0);
    if let Some(g) = file.eta_grid {
        sweep.eta_grid = g;
    }
    sweep.bound_eta = file.bound_eta.unwrap_or(sweep.bound_eta);
    sweep.bound_c = file.bound_c;
    sweep.test_set_size = file.test_set_size.unwrap_or(sweep.test_set_size);
    sweep.probe_points = file.probe_points.unwrap_or(sweep.probe_points);
    sweep.bootstrap_resamples = file.bootstrap_resamples.unwrap_or(sweep.bootstrap_resamples);
    if let Some(e) = file.estimator {
        sweep.estimator.k = e.k.unwrap_or(sweep.estimator.k);
        sweep.estimator.bins = e.bins.unwrap_or(sweep.estimator.bins);
    }
    if let Some(o) = file.outputs {
        sweep.outputs.cgf = o.cgf.unwrap_or(sweep.outputs.cgf);
        sweep.outputs.mi = o.mi.unwrap_or(sweep.outputs.mi);
        sweep.outputs.bounds = o.bounds.unwrap_or(sweep.outputs.bounds);
    }
    if let Err(e) = sweep.validate() {
        let msg = e.to_string();
        let key = [
            "n_grid",
            "repetitions",
            "eta_grid",
            "bound_eta",
            "bound_c",
            "bootstrap_resamples",
            "test_set_size",
        ]
        .into_iter()
        .find(|k| msg.contains(k))
        .unwrap_or("repetitions");
        return Err(field_error(src, origin, key, msg));
    }

    let acceptance = file.acceptance.unwrap_or_default();
    if let Some(c) = acceptance.criteria.iter().find(|c| !CRITERIA.contains(c)) {
        return Err(field_error(src, origin, "criteria", format!("no acceptance criterion {c}")));
    }
    let name = file.name.unwrap_or_else(|| "sweep".into());
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        return Err(field_error(src, origin, "name", "use letters, digits, '_' or '-'"));
    }
    Ok(RunConfig { name, sweep, acceptance })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "model = \"gaussian_mean\"\nn_grid = [50, 100]\nrepetitions = 100\n";

    #[test]
    fn minimal_config_resolves_defaults() {
        let c = parse_config(MINIMAL, "min.toml").unwrap();
        assert_eq!(c.name, "sweep");
        assert_eq!(c.sweep.n_grid, vec![50, 100]);
        assert_eq!(c.sweep.master_seed, 0);
        assert_eq!(c.sweep.bound_eta, 0.125);
        assert_eq!(c.digest().len(), 64);
        assert_eq!(c.digest(), parse_config(MINIMAL, "other.toml").unwrap().digest());
    }

    #[test]
    fn duplicate_n_names_line_and_field() {
        let src = "model = \"gaussian_mean\"\nrepetitions = 10\nn_grid = [50, 100, 100]\n";
        let e = parse_config(src, "dup.toml").unwrap_err().to_string();
        assert!(e.contains("dup.toml:3") && e.contains("n_grid") && e.contains("duplicate"), "{e}");
    }

    #[test]
    fn unknown_key_is_rejected_with_position() {
        let src = format!("{MINIMAL}[params]\nnoise = 2.0\n");
        let e = parse_config(&src, "x.toml").unwrap_err().to_string();
        assert!(e.contains("x.toml:5:1") && e.contains("noise"), "{e}");
    }

    #[test]
    fn wrong_type_and_bad_values() {
        let e = parse_config("model = \"gaussian_mean\"\nn_grid = [50]\nrepetitions = \"ten\"\n", "t.toml")
            .unwrap_err()
            .to_string();
        assert!(e.contains("t.toml:3"), "{e}");
        let e = parse_config("model = \"gaussian_mean\"\nn_grid = [50]\nrepetitions = 1\n", "t.toml")
            .unwrap_err()
            .to_string();
        assert!(e.contains("t.toml:3") && e.contains("repetitions"), "{e}");
        let e = parse_config(&format!("{MINIMAL}[acceptance]\ncriteria = [13]\n"), "t.toml")
            .unwrap_err()
            .to_string();
        assert!(e.contains("t.toml:5") && e.contains("13"), "{e}");
    }

    #[test]
    fn shipped_configs_parse() {
        let min = parse_config(include_str!("../../configs/minimal.toml"), "minimal.toml").unwrap();
        assert_eq!(min.sweep.n_grid, vec![50, 100]);
        let full = parse_config(include_str!("../../configs/logistic_reproduction.toml"), "logistic.toml").unwrap();
        assert_eq!(full.sweep.n_grid, vec![50, 100, 200, 350, 500]);
        assert_eq!(full.acceptance.criteria, CRITERIA.to_vec());
        assert_eq!(full.acceptance.examples, ExampleId::ALL.to_vec());
    }

    #[test]
    fn params_override_defaults() {
        let src = format!("{MINIMAL}[params]\nnoise_sd = 2.0\n");
        let c = parse_config(&src, "p.toml").unwrap();
        assert_eq!(c.sweep.model.params.noise_sd, 2.0);
        assert_eq!(c.sweep.bound_eta, 1.0 / 32.0);
    }
}
