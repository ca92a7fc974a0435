//! One report bundle per worked example: curves, fits and verdicts.

use super::criteria::{
    counterexample_table, discrete_mean_c, logistic_config, logistic_verdict, run_criterion, selection_formula,
    zero_mean_formula, ReproOptions, Verdict,
};
use super::fit::{fit_rate, RateFit};
use super::sweep::{run_sweep, SweepResult};
use super::table::Table;
use crate::bounds::{eta_c_bound, fast_subgaussian_bound, gaussian_lower_bounds, mi_sqrt_bound};
use crate::conditions::eta_c_check;
use crate::error::{Error, Result};
use crate::learning::LearningTuple;
use crate::models::{cgf, closed_form, discrete_mean_mi_quadrature, excess_moments, CgfKind};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExampleId {
    #[serde(rename = "example_2")]
    Example2,
    #[serde(rename = "example_3")]
    Example3,
    #[serde(rename = "example_5_6")]
    Example5And6,
    #[serde(rename = "sec_5_1")]
    Sec51,
    #[serde(rename = "sec_5_2")]
    Sec52,
    #[serde(rename = "sec_5_3")]
    Sec53,
    #[serde(rename = "example_7")]
    Example7,
    #[serde(rename = "example_8")]
    Example8,
}

impl ExampleId {
    pub const ALL: [ExampleId; 8] = [
        ExampleId::Example2,
        ExampleId::Example3,
        ExampleId::Example5And6,
        ExampleId::Sec51,
        ExampleId::Sec52,
        ExampleId::Sec53,
        ExampleId::Example7,
        ExampleId::Example8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExampleId::Example2 => "example_2",
            ExampleId::Example3 => "example_3",
            ExampleId::Example5And6 => "example_5_6",
            ExampleId::Sec51 => "sec_5_1",
            ExampleId::Sec52 => "sec_5_2",
            ExampleId::Sec53 => "sec_5_3",
            ExampleId::Example7 => "example_7",
            ExampleId::Example8 => "example_8",
        }
    }

    /// Acceptance criteria whose verdicts the bundle carries.
    pub fn criteria(self) -> &'static [u8] {
        match self {
            ExampleId::Example2 => &[1, 2, 4, 5],
            ExampleId::Example3 => &[11],
            ExampleId::Example5And6 => &[3],
            ExampleId::Sec51 => &[7],
            ExampleId::Sec52 => &[8],
            ExampleId::Sec53 => &[10, 9],
            ExampleId::Example7 | ExampleId::Example8 => &[6],
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExampleId::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| {
            let names: Vec<_> = ExampleId::ALL.iter().map(|e| e.name()).collect();
            Error::InvalidInput(format!("unknown example id {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

#[derive(Debug, Clone)]
pub struct ReportBundle {
    pub id: ExampleId,
    /// Main curve table; written as `<id>_curves.csv`.
    pub curves: Table,
    /// Supporting tables (Monte-Carlo curves, condition checks).
    pub tables: Vec<Table>,
    pub fits: Vec<(String, RateFit)>,
    pub verdicts: Vec<Verdict>,
}

impl ReportBundle {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    /// Verdict document; contains nothing that depends on timing.
    pub fn verdicts_json(&self) -> Value {
        let fits: Vec<Value> = self
            .fits
            .iter()
            .map(|(name, f)| {
                json!({
                    "curve": name,
                    "slope": f.slope,
                    "intercept": f.intercept,
                    "slope_stderr": f.slope_stderr,
                    "r_squared": f.r_squared,
                    "excluded": f.excluded.len(),
                })
            })
            .collect();
        json!({
            "example": self.id.name(),
            "passed": self.passed(),
            "verdicts": self.verdicts,
            "fits": fits,
        })
    }
}

pub fn reproduce_example(id: ExampleId, opts: &ReproOptions) -> Result<ReportBundle> {
    let mut bundle = match id {
        ExampleId::Example2 => example_2()?,
        ExampleId::Example3 => example_3()?,
        ExampleId::Example5And6 => example_5_6()?,
        ExampleId::Sec51 => sec_5_1()?,
        ExampleId::Sec52 => sec_5_2()?,
        ExampleId::Sec53 => sec_5_3(opts)?,
        ExampleId::Example7 => counterexample(id, &LearningTuple::zero_mean_discrete(1.0)?, 100)?,
        ExampleId::Example8 => counterexample(id, &LearningTuple::hypothesis_selection(0.0, 1.0)?, 10)?,
    };
    for &c in id.criteria() {
        if bundle.verdicts.iter().any(|v| v.criterion == Some(c)) {
            continue;
        }
        let out = run_criterion(c, opts)?;
        bundle.verdicts.push(out.verdict);
        bundle.tables.extend(out.tables);
    }
    Ok(bundle)
}

fn bundle(id: ExampleId, curves: Table) -> ReportBundle {
    ReportBundle {
        id,
        curves,
        tables: Vec::new(),
        fits: Vec::new(),
        verdicts: Vec::new(),
    }
}

/// Rate fits of the named columns against `n`.
fn fit_columns(t: &Table, names: &[&str]) -> Result<Vec<(String, RateFit)>> {
    let n = t.column("n").ok_or_else(|| Error::Runtime("table has no n column".into()))?;
    names
        .iter()
        .map(|name| {
            let v = t
                .column(name)
                .ok_or_else(|| Error::Runtime(format!("table has no {name} column")))?;
            let pts: Vec<(f64, f64)> = n.iter().copied().zip(v).collect();
            Ok((name.to_string(), fit_rate(&pts)?))
        })
        .collect()
}

fn slope_verdict(name: &str, fits: &[(String, RateFit)], target: f64, tol: f64) -> Verdict {
    let mut v = Verdict {
        criterion: None,
        name: name.into(),
        passed: true,
        details: Vec::new(),
        elapsed_secs: 0.0,
    };
    for (curve, f) in fits {
        let ok = (f.slope - target).abs() <= tol;
        v.passed &= ok;
        v.details.push(format!(
            "[{}] {curve} slope {:.4} (target {target} +/- {tol})",
            if ok { "pass" } else { "FAIL" },
            f.slope
        ));
    }
    v
}

fn gaussian() -> Result<LearningTuple> {
    LearningTuple::gaussian_mean(0.0, 1.0)
}

fn example_2() -> Result<ReportBundle> {
    let g = gaussian()?;
    let mut t = Table::new("example_2", &["n", "true_gen", "bound_sqrt", "bound_eta_c", "lower_bound"]);
    for n in [10usize, 100, 1_000, 10_000, 100_000] {
        let cf = closed_form(&g, n)?;
        let proxy = cf.subgaussian_proxy_loss.unwrap_or(f64::NAN);
        let sqrt = mi_sqrt_bound(proxy, &cf.mi_per_sample)?.value;
        let ec = eta_c_bound(0.125, 0.5, cf.empirical_excess, &cf.mi_per_sample)?.value;
        let (lo, _) = gaussian_lower_bounds(&g, &cf.mi_per_sample, cf.empirical_excess, cf.gen_error)?;
        t.push(vec![n.into(), cf.gen_error.into(), sqrt.into(), ec.into(), lo.value.into()]);
    }
    let mut b = bundle(ExampleId::Example2, t);
    b.fits = fit_columns(&b.curves, &["true_gen", "bound_sqrt", "bound_eta_c", "lower_bound"])?;
    Ok(b)
}

fn example_3() -> Result<ReportBundle> {
    let g = gaussian()?;
    let sigma = g.params.noise_sd;
    let eta_c = 1.0 / (8.0 * sigma * sigma);
    let mut t = Table::new(
        "example_3",
        &["n", "true_excess", "true_gen", "proxy_excess", "bound_fast", "max_c"],
    );
    for n in [10usize, 20, 50, 100, 200, 500, 1_000, 10_000] {
        let cf = closed_form(&g, n)?;
        let proxy = cf.subgaussian_proxy_excess.unwrap_or(f64::NAN);
        let s = proxy.sqrt();
        // Midpoint of the admissible η range, where a_η = 1/2.
        let fast = fast_subgaussian_bound(s, cf.excess / proxy, cf.excess, &cf.mi_per_sample, cf.empirical_excess)?;
        let mean = excess_moments(&g, n)?.mean;
        let c = eta_c_check(cgf(&g, n, CgfKind::ExcessNeg, eta_c)?, mean, eta_c).max_c;
        t.push(vec![
            n.into(),
            cf.excess.into(),
            cf.gen_error.into(),
            proxy.into(),
            fast.value.into(),
            c.unwrap_or(f64::NAN).into(),
        ]);
    }
    let mut b = bundle(ExampleId::Example3, t);
    b.fits = fit_columns(&b.curves, &["bound_fast"])?;
    let mut v = slope_verdict("sub-Gaussian excess gives an O(1/n) bound", &b.fits, -1.0, 0.02);
    let (gen, fast) = (b.curves.column("true_gen"), b.curves.column("bound_fast"));
    if let (Some(gen), Some(fast)) = (gen, fast) {
        let ok = gen.iter().zip(&fast).all(|(g, f)| f >= g);
        v.passed &= ok;
        v.details.push(format!("[{}] bound >= true gen at every n", if ok { "pass" } else { "FAIL" }));
    }
    b.verdicts.push(v);
    Ok(b)
}

fn example_5_6() -> Result<ReportBundle> {
    let g = gaussian()?;
    let s2 = g.params.noise_sd.powi(2);
    let mut t = Table::new(
        "example_5_6",
        &["n", "true_gen", "bound_sub_gaussian", "bound_eta_c", "three_over_n", "seven_over_n"],
    );
    for n in [100usize, 1_000, 10_000, 100_000] {
        let cf = closed_form(&g, n)?;
        let nf = n as f64;
        // Proxy 4σ⁴/n with η = 1/(4σ²).
        let proxy = 4.0 * s2 * s2 / nf;
        let sg = fast_subgaussian_bound(
            proxy.sqrt(),
            0.25 / s2,
            cf.excess,
            &cf.mi_per_sample,
            cf.empirical_excess,
        )?;
        let ec = eta_c_bound(0.125 / s2, 0.5, cf.empirical_excess, &cf.mi_per_sample)?;
        t.push(vec![
            n.into(),
            cf.gen_error.into(),
            sg.value.into(),
            ec.value.into(),
            (3.0 * s2 / nf).into(),
            (7.0 * s2 / nf).into(),
        ]);
    }
    let mut b = bundle(ExampleId::Example5And6, t);
    b.fits = fit_columns(&b.curves, &["bound_sub_gaussian", "bound_eta_c"])?;
    let v = slope_verdict("sub-Gaussian and (eta,c) bounds decay as 1/n", &b.fits, -1.0, 0.02);
    b.verdicts.push(v);
    Ok(b)
}

fn sec_5_1() -> Result<ReportBundle> {
    let tuple = LearningTuple::discrete_mean(1.0, 1.0)?;
    let (eta, c) = (0.25, discrete_mean_c(0.25));
    let mut t = Table::new(
        "sec_5_1",
        &["n", "true_gen", "true_excess", "mi", "mi_quadrature", "bound_eta_c"],
    );
    for n in 2usize..=24 {
        let cf = closed_form(&tuple, n)?;
        let q = discrete_mean_mi_quadrature(n, 1.0, 1.0)?;
        let ec = eta_c_bound(eta, c, cf.empirical_excess, &cf.mi_per_sample)?;
        t.push(vec![
            n.into(),
            cf.gen_error.into(),
            cf.excess.into(),
            cf.mean_mi().into(),
            q.into(),
            ec.value.into(),
        ]);
    }
    Ok(bundle(ExampleId::Sec51, t))
}

fn sec_5_2() -> Result<ReportBundle> {
    let sigma: f64 = 1.0;
    let s2 = sigma * sigma;
    let mut t = Table::new("sec_5_2", &["n", "true_gen", "mean_mi", "mi_cap", "bound_eta_c"]);
    for n in [10usize, 20, 40, 80, 160] {
        let tuple = LearningTuple::linear_regression(vec![1.0; n], 1.0, sigma)?;
        let cf = closed_form(&tuple, n)?;
        let nf = n as f64;
        let ec = eta_c_bound(0.25 / s2, 0.5, cf.empirical_excess, &cf.mi_per_sample)?;
        // All-ones design: c_design = (n − 1)/n.
        let cap = 1.0 / (2.0 * (nf - 1.0));
        t.push(vec![n.into(), cf.gen_error.into(), cf.mean_mi().into(), cap.into(), ec.value.into()]);
    }
    let mut b = bundle(ExampleId::Sec52, t);
    b.fits = fit_columns(&b.curves, &["true_gen", "mean_mi", "bound_eta_c"])?;
    Ok(b)
}

fn sec_5_3(opts: &ReproOptions) -> Result<ReportBundle> {
    let start = Instant::now();
    let res = run_sweep(&logistic_config(opts))?;
    let verdict = logistic_verdict(&res, start.elapsed().as_secs_f64());
    let mut b = bundle(ExampleId::Sec53, logistic_curves(&res));
    b.tables = logistic_tables(&res);
    b.fits = fit_columns(&b.curves, &["mc_gen", "mc_excess", "bound_eta_c", "bound_sqrt"])?;
    b.verdicts.push(verdict);
    Ok(b)
}

fn logistic_curves(res: &SweepResult) -> Table {
    let mut t = Table::new(
        "sec_5_3",
        &[
            "n",
            "mc_gen",
            "mc_gen_stderr",
            "mc_excess",
            "mc_excess_stderr",
            "mi",
            "c_used",
            "bound_eta_c",
            "bound_eta_c_excess",
            "bound_eta_c_pooled",
            "bound_eta_c_pooled_excess",
            "bound_sqrt",
        ],
    );
    for r in &res.rows {
        let b = &r.bounds;
        t.push(vec![
            r.n.into(),
            r.gen_error.mean.into(),
            r.gen_error.stderr.into(),
            r.excess.mean.into(),
            r.excess.stderr.into(),
            r.mi.into(),
            b.c_used.into(),
            b.eta_c.into(),
            b.eta_c_excess.into(),
            b.eta_c_pooled.into(),
            b.eta_c_pooled_excess.into(),
            b.sqrt.into(),
        ]);
    }
    t
}

/// Generalization, excess-risk and bound-comparison tables.
fn logistic_tables(res: &SweepResult) -> Vec<Table> {
    let mut gen = Table::new(
        "sec_5_3_gen",
        &["n", "mc_gen", "mc_gen_stderr", "bound_eta_c", "bound_eta_c_pooled"],
    );
    let mut exc = Table::new(
        "sec_5_3_excess",
        &["n", "mc_excess", "mc_excess_stderr", "bound_eta_c_excess", "bound_eta_c_pooled_excess"],
    );
    let mut cmp = Table::new("sec_5_3_bounds", &["n", "bound_eta_c", "bound_sqrt", "ratio"]);
    for r in &res.rows {
        let b = &r.bounds;
        gen.push(vec![
            r.n.into(),
            r.gen_error.mean.into(),
            r.gen_error.stderr.into(),
            b.eta_c.into(),
            b.eta_c_pooled.into(),
        ]);
        exc.push(vec![
            r.n.into(),
            r.excess.mean.into(),
            r.excess.stderr.into(),
            b.eta_c_excess.into(),
            b.eta_c_pooled_excess.into(),
        ]);
        cmp.push(vec![r.n.into(), b.eta_c.into(), b.sqrt.into(), (b.eta_c / b.sqrt).into()]);
    }
    vec![gen, exc, cmp, res.cgf_table()]
}

fn counterexample(id: ExampleId, tuple: &LearningTuple, n: usize) -> Result<ReportBundle> {
    let mut scratch = Verdict {
        criterion: None,
        name: String::new(),
        passed: true,
        details: Vec::new(),
        elapsed_secs: 0.0,
    };
    let t = if id == ExampleId::Example7 {
        counterexample_table(&mut scratch, tuple, n, zero_mean_formula)?
    } else {
        let sigma = tuple.params.noise_sd;
        counterexample_table(&mut scratch, tuple, n, |e| selection_formula(e, n, sigma))?
    };
    Ok(bundle(id, t))
}
