//! Repeated train/evaluate loops over a grid of sample sizes.

use super::table::{Cell, Table};
use crate::bounds::{
    eta_c_bound, eta_c_loss_bound, fast_subgaussian_bound, gaussian_loss_central_c, gaussian_lower_bounds,
    mi_sqrt_bound, BoundReport,
};
use crate::conditions::{eta_c_check, eta_c_check_samples, Bootstrap, ConditionReport, ExcessSamples};
use crate::error::{invalid, Error, Result};
use crate::learning::{excess_loss, risk_record, Dataset, LearningTuple, ModelId, Population, RiskRecord};
use crate::mi::{chain_rule_mi, closed_form_mi, Points, DEFAULT_K};
use crate::models::{cgf, closed_form, excess_moments, sample_dataset, train, CgfKind, ClosedFormReport};
use crate::rng::RngStream;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Stream tags derived from a repetition's stream.
const TAG_TEST: u64 = 1;
const TAG_PROBE: u64 = 2;
const TAG_BOOTSTRAP: u64 = 3;

/// Largest tolerated fraction of non-converged fits.
pub const NONCONVERGENCE_LIMIT: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimatorSettings {
    pub k: usize,
    pub bins: usize,
}

impl Default for EstimatorSettings {
    fn default() -> Self {
        EstimatorSettings { k: DEFAULT_K, bins: 16 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputFlags {
    pub cgf: bool,
    pub mi: bool,
    pub bounds: bool,
}

impl Default for OutputFlags {
    fn default() -> Self {
        OutputFlags {
            cgf: true,
            mi: true,
            bounds: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub model: LearningTuple,
    pub n_grid: Vec<usize>,
    pub repetitions: usize,
    pub master_seed: u64,
    pub eta_grid: Vec<f64>,
    pub estimator: EstimatorSettings,
    pub outputs: OutputFlags,
    /// `η` of the (η,c)-central bound curves.
    pub bound_eta: f64,
    /// `c` of the bound curves; `None` uses the closed-form or empirical `max_c` at `bound_eta`.
    pub bound_c: Option<f64>,
    /// Held-out points per repetition for models without closed-form risks.
    pub test_set_size: usize,
    /// Fresh points per repetition for the empirical CGF of closed-form models.
    pub probe_points: usize,
    pub bootstrap_resamples: usize,
}

impl SweepConfig {
    pub fn new(model: LearningTuple) -> Self {
        let bound_eta = match model.model {
            ModelId::LogisticRegression => 0.8,
            _ => 1.0 / (8.0 * model.params.noise_sd.powi(2)),
        };
        SweepConfig {
            model,
            n_grid: vec![50, 100, 200, 400],
            repetitions: 100,
            master_seed: 0,
            eta_grid: vec![0.1, 0.25, 0.5],
            estimator: EstimatorSettings::default(),
            outputs: OutputFlags::default(),
            bound_eta,
            bound_c: None,
            test_set_size: 10_000,
            probe_points: 16,
            bootstrap_resamples: 1000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.n_grid.is_empty() {
            return invalid("n_grid is empty");
        }
        if let Some(w) = self.n_grid.windows(2).find(|w| w[1] <= w[0]) {
            return invalid(format!("n_grid must be strictly ascending, found {} then {}", w[0], w[1]));
        }
        if self.n_grid[0] < 2 {
            return invalid(format!("n_grid entries must be >= 2, got {}", self.n_grid[0]));
        }
        if self.repetitions < 2 {
            return invalid(format!("repetitions must be >= 2, got {}", self.repetitions));
        }
        if let Some(e) = self.eta_grid.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
            return invalid(format!("eta_grid entries must be finite and > 0, got {e}"));
        }
        if !(self.bound_eta > 0.0 && self.bound_eta.is_finite()) {
            return invalid(format!("bound_eta must be finite and > 0, got {}", self.bound_eta));
        }
        if let Some(c) = self.bound_c {
            if !(c > 0.0 && c <= 1.0) {
                return invalid(format!("bound_c must lie in (0, 1], got {c}"));
            }
        }
        if self.estimator.k == 0 || self.estimator.bins < 2 {
            return invalid("estimator settings need k >= 1 and bins >= 2");
        }
        if self.test_set_size == 0 || self.probe_points == 0 || self.bootstrap_resamples < 2 {
            return invalid("test_set_size and probe_points must be >= 1, bootstrap_resamples >= 2");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStderr {
    pub mean: f64,
    pub stderr: f64,
}

impl MeanStderr {
    pub fn of(values: &[f64]) -> Self {
        let m = values.len() as f64;
        let mean = values.iter().sum::<f64>() / m;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
        MeanStderr {
            mean,
            stderr: (var / m).sqrt(),
        }
    }

    /// Distance to `target` in units of the standard error.
    pub fn z_score(&self, target: f64) -> f64 {
        (self.mean - target).abs() / self.stderr
    }
}

/// Bound curve values at one `n`; NaN where a bound does not apply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundValues {
    pub sqrt: f64,
    pub fast: f64,
    pub eta_c: f64,
    pub eta_c_excess: f64,
    pub loss: f64,
    pub lower_gen: f64,
    pub lower_excess: f64,
    /// `c` used by the (η,c)-central curves.
    pub c_used: f64,
    /// (η,c)-central curves with the `c` pooled over all `n` (logistic only).
    pub eta_c_pooled: f64,
    pub eta_c_pooled_excess: f64,
}

impl BoundValues {
    fn nan() -> Self {
        BoundValues {
            sqrt: f64::NAN,
            fast: f64::NAN,
            eta_c: f64::NAN,
            eta_c_excess: f64::NAN,
            loss: f64::NAN,
            lower_gen: f64::NAN,
            lower_excess: f64::NAN,
            c_used: f64::NAN,
            eta_c_pooled: f64::NAN,
            eta_c_pooled_excess: f64::NAN,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub repetitions_used: usize,
    pub nonconverged: usize,
    pub gen_error: MeanStderr,
    pub excess: MeanStderr,
    pub empirical_excess: MeanStderr,
    pub empirical_risk: MeanStderr,
    /// Closed-form values (NaN for logistic).
    pub true_gen: f64,
    pub true_excess: f64,
    pub true_empirical_excess: f64,
    /// Mean per-sample MI: closed form, or the chain-rule estimate.
    pub mi: f64,
    pub mi_source: String,
    pub bounds: BoundValues,
    pub cgf: Vec<ConditionReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub model: ModelId,
    pub rows: Vec<SweepRow>,
    /// Empirical check at `bound_eta` on the `r` samples pooled over every `n` (logistic only).
    pub pooled: Option<ConditionReport>,
}

struct RepOutcome {
    risk: RiskRecord,
    converged: bool,
    /// `r(W, Z')` for fresh `Z'`.
    excess_values: Vec<f64>,
    hypothesis: Vec<f64>,
    dataset: Dataset,
}

fn run_repetition(cfg: &SweepConfig, n: usize, stream: RngStream) -> Result<RepOutcome> {
    let tuple = &cfg.model;
    let (draw, fit) = train(tuple, n, stream)?;
    let (risk, excess_values) = if tuple.model.needs_test_set() {
        let test = sample_dataset(tuple, cfg.test_set_size, &mut stream.derive(TAG_TEST).rng())?;
        let risk = risk_record(tuple, &draw, Population::TestSet(&test))?;
        let r = if cfg.outputs.cgf || cfg.outputs.bounds {
            test.iter()
                .map(|z| excess_loss(tuple, &draw.hypothesis, z))
                .collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        (risk, r)
    } else {
        let risk = risk_record(tuple, &draw, Population::ClosedForm)?;
        let r = if cfg.outputs.cgf {
            probe_excess(cfg, n, &draw.hypothesis, stream.derive(TAG_PROBE))?
        } else {
            Vec::new()
        };
        (risk, r)
    };
    Ok(RepOutcome {
        risk,
        converged: fit.converged,
        excess_values,
        hypothesis: draw.hypothesis,
        dataset: draw.dataset,
    })
}

/// Fresh `r(w, Z')` values for the empirical CGF of closed-form models.
fn probe_excess(cfg: &SweepConfig, n: usize, w: &[f64], stream: RngStream) -> Result<Vec<f64>> {
    let tuple = &cfg.model;
    let mut rng = stream.rng();
    match tuple.model {
        ModelId::HypothesisSelection => (0..cfg.probe_points)
            .map(|_| {
                let s = sample_dataset(tuple, n, &mut rng)?;
                excess_loss(tuple, w, s.values())
            })
            .collect(),
        _ => {
            // The fixed design cycles through all n design points.
            let m = if tuple.model == ModelId::LinearRegression { n } else { cfg.probe_points };
            let s = sample_dataset(tuple, m, &mut rng)?;
            s.iter().map(|z| excess_loss(tuple, w, z)).collect()
        }
    }
}

fn valid_value(r: Result<BoundReport>) -> (f64, f64) {
    match r {
        Ok(b) if b.valid => (b.value, b.excess_value.unwrap_or(f64::NAN)),
        _ => (f64::NAN, f64::NAN),
    }
}

/// Closed-form `max_c` at `eta` when the central condition holds there.
fn closed_form_c(tuple: &LearningTuple, n: usize, eta: f64) -> f64 {
    let report = match (cgf(tuple, n, CgfKind::ExcessNeg, eta), excess_moments(tuple, n)) {
        (Ok(v), Ok(m)) => eta_c_check(v, m.mean, eta),
        _ => return f64::NAN,
    };
    if report.holds {
        report.c
    } else {
        f64::NAN
    }
}

fn closed_form_bounds(cfg: &SweepConfig, cf: &ClosedFormReport, mi: &[f64], emp_risk: f64) -> BoundValues {
    let tuple = &cfg.model;
    let n = cf.n;
    let mut b = BoundValues::nan();
    if let Some(sigma) = cf.subgaussian_proxy_loss {
        b.sqrt = valid_value(mi_sqrt_bound(sigma, mi)).0;
    }
    if let Some(sigma) = cf.subgaussian_proxy_excess {
        // Midpoint of the admissible range, where a_η = 1/2.
        let eta = cf.excess / (sigma * sigma);
        b.fast = valid_value(fast_subgaussian_bound(sigma, eta, cf.excess, mi, cf.empirical_excess)).0;
    }
    let c = cfg.bound_c.unwrap_or_else(|| closed_form_c(tuple, n, cfg.bound_eta));
    b.c_used = c;
    if c > 0.0 {
        (b.eta_c, b.eta_c_excess) = valid_value(eta_c_bound(cfg.bound_eta, c, cf.empirical_excess, mi));
    }
    if tuple.model == ModelId::GaussianMean {
        let cl = gaussian_loss_central_c(cfg.bound_eta, tuple.params.noise_sd);
        b.loss = valid_value(eta_c_loss_bound(cfg.bound_eta, cl, emp_risk, mi)).0;
        if let Ok((g, e)) = gaussian_lower_bounds(tuple, mi, cf.empirical_excess, cf.gen_error) {
            b.lower_gen = g.value;
            b.lower_excess = e.value;
        }
    }
    b
}

/// Chain-rule estimate of `I(W; Z_i)` averaged over a few sample indices `i`.
fn logistic_mi(cfg: &SweepConfig, outcomes: &[RepOutcome], n: usize) -> Result<f64> {
    let dim = cfg.model.params.dim;
    let indices: Vec<usize> = (0..4).map(|j| j * n / 4).collect();
    let w: Vec<f64> = outcomes.iter().flat_map(|o| o.hypothesis.iter().copied()).collect();
    let mut total = 0.0;
    for &i in &indices {
        let mut x = Vec::with_capacity(outcomes.len() * dim);
        let mut y = Vec::with_capacity(outcomes.len());
        for o in outcomes {
            let z = o.dataset.sample(i);
            x.extend_from_slice(&z[..dim]);
            y.push(z[dim] as i64);
        }
        let est = chain_rule_mi(Points::new(&w, dim)?, Points::new(&x, dim)?, &y, cfg.estimator.k)?;
        total += est.value;
    }
    Ok(total / indices.len() as f64)
}

fn logistic_bounds(cfg: &SweepConfig, mi: f64, emp: f64, c: f64) -> BoundValues {
    let mut b = BoundValues::nan();
    // Comparison curve for a loss treated as bounded in [0, 1]: σ = 1/2.
    b.sqrt = valid_value(mi_sqrt_bound(0.5, &[mi])).0;
    b.c_used = c;
    if c > 0.0 {
        (b.eta_c, b.eta_c_excess) = valid_value(eta_c_bound(cfg.bound_eta, c, emp, &[mi]));
    }
    b
}

/// Run every repetition at every `n` and aggregate.
///
/// Repetition `r` draws from `RngStream(master_seed, r)` at every `n`, so the
/// grid shares common random numbers. Per-repetition results are collected in
/// index order and reduced sequentially, so the output does not depend on the
/// thread count.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let tuple = &cfg.model;
    let logistic = tuple.model == ModelId::LogisticRegression;
    let mut rows = Vec::with_capacity(cfg.n_grid.len());
    let mut pooled_groups: Vec<Vec<f64>> = Vec::new();
    for &n in &cfg.n_grid {
        let outcomes: Vec<RepOutcome> = (0..cfg.repetitions as u64)
            .into_par_iter()
            .map(|r| run_repetition(cfg, n, RngStream::new(cfg.master_seed, r)))
            .collect::<Result<_>>()?;
        let nonconverged = outcomes.iter().filter(|o| !o.converged).count();
        if nonconverged as f64 > NONCONVERGENCE_LIMIT * cfg.repetitions as f64 {
            return Err(Error::Runtime(format!(
                "{nonconverged} of {} fits did not converge at n = {n} (limit {:.0}%)",
                cfg.repetitions,
                NONCONVERGENCE_LIMIT * 100.0
            )));
        }
        let used: Vec<RepOutcome> = outcomes.into_iter().filter(|o| o.converged).collect();
        let col = |f: fn(&RiskRecord) -> f64| -> Vec<f64> { used.iter().map(|o| f(&o.risk)).collect() };
        let gen_error = MeanStderr::of(&col(|r| r.gen_error));
        let excess = MeanStderr::of(&col(|r| r.excess_risk));
        let empirical_excess = MeanStderr::of(&col(|r| r.empirical_excess));
        let empirical_risk = MeanStderr::of(&col(|r| r.empirical_risk));

        let samples = if !used[0].excess_values.is_empty() {
            Some(ExcessSamples::grouped(used.iter().map(|o| o.excess_values.clone()).collect())?)
        } else {
            None
        };
        let bootstrap = |tag: u64| Bootstrap {
            resamples: cfg.bootstrap_resamples,
            stream: RngStream::new(cfg.master_seed, 0).derive(TAG_BOOTSTRAP).derive(tag),
        };
        let cgf_rows = match (&samples, cfg.outputs.cgf) {
            (Some(s), true) => cfg
                .eta_grid
                .iter()
                .map(|&eta| eta_c_check_samples(s, eta, bootstrap(n as u64)))
                .collect::<Result<Vec<_>>>()?,
            _ => Vec::new(),
        };

        let (true_gen, true_excess, true_emp, mi, mi_source, bounds) = if logistic {
            let mi = if cfg.outputs.mi || cfg.outputs.bounds {
                logistic_mi(cfg, &used, n)?
            } else {
                f64::NAN
            };
            let bounds = match (&samples, cfg.outputs.bounds) {
                (Some(s), true) => {
                    let c = match cfg.bound_c {
                        Some(c) => c,
                        None => eta_c_check_samples(s, cfg.bound_eta, bootstrap(n as u64))?
                            .max_c
                            .unwrap_or(f64::NAN),
                    };
                    logistic_bounds(cfg, mi, empirical_excess.mean, c)
                }
                _ => BoundValues::nan(),
            };
            if samples.is_some() {
                pooled_groups.extend(used.iter().map(|o| o.excess_values.clone()));
            }
            (f64::NAN, f64::NAN, f64::NAN, mi, "chain_rule".to_string(), bounds)
        } else {
            let cf = closed_form(tuple, n)?;
            let mi_list: Vec<f64> = closed_form_mi(tuple, n)?.iter().map(|e| e.value).collect();
            let mi = mi_list.iter().sum::<f64>() / mi_list.len() as f64;
            let bounds = if cfg.outputs.bounds && !tuple.model.dataset_level() {
                closed_form_bounds(cfg, &cf, &mi_list, empirical_risk.mean)
            } else {
                BoundValues::nan()
            };
            (cf.gen_error, cf.excess, cf.empirical_excess, mi, "closed_form".to_string(), bounds)
        };
        rows.push(SweepRow {
            n,
            repetitions_used: used.len(),
            nonconverged,
            gen_error,
            excess,
            empirical_excess,
            empirical_risk,
            true_gen,
            true_excess,
            true_empirical_excess: true_emp,
            mi,
            mi_source,
            bounds,
            cgf: cgf_rows,
        });
    }
    let pooled = if logistic && !pooled_groups.is_empty() && cfg.outputs.bounds {
        let s = ExcessSamples::grouped(pooled_groups)?;
        let boot = Bootstrap {
            resamples: cfg.bootstrap_resamples,
            stream: RngStream::new(cfg.master_seed, 0).derive(TAG_BOOTSTRAP).derive(u64::MAX),
        };
        let report = eta_c_check_samples(&s, cfg.bound_eta, boot)?;
        if let Some(c) = report.max_c.filter(|c| *c > 0.0) {
            for row in &mut rows {
                let (v, e) = valid_value(eta_c_bound(cfg.bound_eta, c, row.empirical_excess.mean, &[row.mi]));
                row.bounds.eta_c_pooled = v;
                row.bounds.eta_c_pooled_excess = e;
            }
        }
        Some(report)
    } else {
        None
    };
    Ok(SweepResult {
        model: tuple.model,
        rows,
        pooled,
    })
}

impl SweepResult {
    /// One row per `n`.
    pub fn summary_table(&self) -> Table {
        let mut t = Table::new(
            "sweep",
            &[
                "n",
                "repetitions",
                "nonconverged",
                "gen_mean",
                "gen_stderr",
                "excess_mean",
                "excess_stderr",
                "emp_excess_mean",
                "emp_excess_stderr",
                "true_gen",
                "true_excess",
                "true_emp_excess",
                "mi",
                "mi_source",
                "c_used",
                "bound_sqrt",
                "bound_fast",
                "bound_eta_c",
                "bound_eta_c_excess",
                "bound_eta_c_pooled",
                "bound_eta_c_pooled_excess",
                "bound_loss",
                "lower_gen",
                "lower_excess",
            ],
        );
        for r in &self.rows {
            let b = &r.bounds;
            t.push(vec![
                r.n.into(),
                r.repetitions_used.into(),
                r.nonconverged.into(),
                r.gen_error.mean.into(),
                r.gen_error.stderr.into(),
                r.excess.mean.into(),
                r.excess.stderr.into(),
                r.empirical_excess.mean.into(),
                r.empirical_excess.stderr.into(),
                r.true_gen.into(),
                r.true_excess.into(),
                r.true_empirical_excess.into(),
                r.mi.into(),
                Cell::Text(r.mi_source.clone()),
                b.c_used.into(),
                b.sqrt.into(),
                b.fast.into(),
                b.eta_c.into(),
                b.eta_c_excess.into(),
                b.eta_c_pooled.into(),
                b.eta_c_pooled_excess.into(),
                b.loss.into(),
                b.lower_gen.into(),
                b.lower_excess.into(),
            ]);
        }
        t
    }

    /// Empirical CGF checks, one row per `(n, η)`.
    pub fn cgf_table(&self) -> Table {
        let mut t = Table::new(
            "cgf",
            &["n", "eta", "cgf", "mean_r", "max_c", "ci_low", "ci_high", "holds", "reason"],
        );
        let rows = self.rows.iter().flat_map(|r| r.cgf.iter().map(move |c| (r.n, c)));
        let pooled = self.pooled.iter().map(|c| (0usize, c));
        for (n, c) in rows.chain(pooled) {
            let [lo, hi] = c.max_c_ci.unwrap_or([f64::NAN; 2]);
            t.push(vec![
                n.into(),
                c.eta.into(),
                c.cgf.into(),
                c.mean_r.into(),
                c.max_c.unwrap_or(f64::NAN).into(),
                lo.into(),
                hi.into(),
                c.holds.into(),
                Cell::Text(c.reason.clone().unwrap_or_default()),
            ]);
        }
        t
    }

    pub fn row(&self, n: usize) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(model: LearningTuple) -> SweepConfig {
        let mut c = SweepConfig::new(model);
        c.n_grid = vec![10, 20];
        c.repetitions = 200;
        c.master_seed = 11;
        c.bootstrap_resamples = 50;
        c
    }

    #[test]
    fn validation() {
        let mut c = small(LearningTuple::gaussian_mean(0.0, 1.0).unwrap());
        c.n_grid = vec![10, 10];
        assert!(c.validate().is_err());
        c.n_grid = vec![10];
        c.repetitions = 1;
        assert!(c.validate().is_err());
    }

    #[test]
    fn gaussian_sweep_tracks_closed_forms() {
        let r = run_sweep(&small(LearningTuple::gaussian_mean(0.0, 1.0).unwrap())).unwrap();
        for row in &r.rows {
            assert!(row.gen_error.z_score(row.true_gen) < 5.0);
            assert!(row.empirical_excess.z_score(row.true_empirical_excess) < 5.0);
            assert!(row.bounds.eta_c >= row.true_gen && row.bounds.sqrt >= row.true_gen);
            assert!(row.bounds.lower_gen <= row.true_gen);
            assert_eq!(row.cgf.len(), 3);
        }
        assert_eq!(r.summary_table().len(), 2);
    }

    #[test]
    fn thread_count_does_not_matter() {
        let cfg = small(LearningTuple::discrete_mean(1.0, 1.0).unwrap());
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| run_sweep(&cfg)).unwrap();
        let b = four.install(|| run_sweep(&cfg)).unwrap();
        assert_eq!(a.summary_table().to_csv(), b.summary_table().to_csv());
        assert_eq!(a.cgf_table().to_csv(), b.cgf_table().to_csv());
    }

    #[test]
    fn stderr_halves_with_four_times_the_repetitions() {
        let mut c = SweepConfig::new(LearningTuple::gaussian_mean(0.0, 1.0).unwrap());
        c.n_grid = vec![20];
        c.outputs = OutputFlags {
            cgf: false,
            mi: false,
            bounds: false,
        };
        c.repetitions = 2000;
        let a = run_sweep(&c).unwrap().rows[0].gen_error.stderr;
        c.repetitions = 8000;
        let b = run_sweep(&c).unwrap().rows[0].gen_error.stderr;
        assert!((a / b / 2.0 - 1.0).abs() < 0.2, "{a} {b}");
    }

    #[test]
    fn logistic_small_run() {
        let mut c = small(LearningTuple::with_defaults(ModelId::LogisticRegression));
        c.n_grid = vec![50, 100];
        c.repetitions = 60;
        c.test_set_size = 500;
        let r = run_sweep(&c).unwrap();
        assert!(r.pooled.is_some());
        assert!(r.rows.iter().all(|row| row.mi.is_finite() && row.true_gen.is_nan()));
    }
}
