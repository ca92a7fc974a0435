//! Fast-rate conditions on the pointwise excess loss `r(W, Z)` under `P_W ⊗ μ`.
//!
//! The central object is the (η,c)-central condition
//! `ln E e^{-η r} ≤ -c η E[r]`, checked either from the exact CGF of a model
//! or from samples with a bootstrap confidence interval. The implication
//! maps turn Bernstein, witness, sub-exponential and sub-Gamma parameters
//! into an `(η, c)` pair.
//!
//! A report `holds` exactly when `E[r] > 0`, the reported `c` is positive and
//! the margin at `(η, c)` is non-negative.

use crate::error::{invalid, Error, Result};
use crate::learning::LearningTuple;
use crate::models::{excess_moments, CgfEvaluator, CgfKind};
use crate::rng::RngStream;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionId {
    EtaCCentral,
    VCCentral,
    Bernstein,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    ClosedForm,
    Empirical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: ConditionId,
    pub holds: bool,
    /// Largest `c ∈ [0, 1]` satisfying the inequality; `None` when `E[r] ≤ 0`.
    pub max_c: Option<f64>,
    pub eta: f64,
    /// The `c` at which `margin` is evaluated.
    pub c: f64,
    /// Right-hand side minus left-hand side, in nats.
    pub margin: f64,
    pub cgf: f64,
    pub mean_r: f64,
    /// Slack `ε` of the (v,c)-central condition.
    pub epsilon: Option<f64>,
    pub reason: Option<String>,
    pub source: Source,
    pub sample_count: Option<usize>,
    /// Half-width of the 95% bootstrap interval of `max_c`.
    pub ci_halfwidth: Option<f64>,
    pub max_c_ci: Option<[f64; 2]>,
}

pub const NONPOSITIVE_MEAN: &str = "nonpositive_mean";

/// `ln (1/N) Σ e^{-η v_i}`, evaluated with a max-shift.
pub fn empirical_cgf(values: &[f64], eta: f64) -> Result<f64> {
    if values.is_empty() {
        return invalid("empirical_cgf needs at least one value");
    }
    if !eta.is_finite() {
        return invalid(format!("eta must be finite, got {eta}"));
    }
    if eta == 0.0 {
        return Ok(0.0);
    }
    Ok(log_mean_exp_neg(values, eta))
}

fn log_mean_exp_neg(values: &[f64], eta: f64) -> f64 {
    // Shift by the largest exponent -η v.
    let shift = values.iter().map(|v| -eta * v).fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = values.iter().map(|v| (-eta * v - shift).exp()).sum();
    shift + (s / values.len() as f64).ln()
}

/// Core of Definition-1 style checks with an additive slack `v·ε` on the right.
fn central_report(cgf: f64, mean_r: f64, eta: f64, slack: f64) -> ConditionReport {
    let mut report = ConditionReport {
        condition: ConditionId::EtaCCentral,
        holds: false,
        max_c: None,
        eta,
        c: 0.0,
        margin: slack - cgf,
        cgf,
        mean_r,
        epsilon: None,
        reason: None,
        source: Source::ClosedForm,
        sample_count: None,
        ci_halfwidth: None,
        max_c_ci: None,
    };
    if !(mean_r > 0.0) {
        report.reason = Some(NONPOSITIVE_MEAN.into());
        return report;
    }
    let raw = (slack - cgf) / (eta * mean_r);
    let c = if raw.is_nan() { 0.0 } else { raw.clamp(0.0, 1.0) };
    report.max_c = Some(c);
    report.c = c;
    report.margin = if raw > 0.0 && raw < 1.0 {
        // Equality by construction of c.
        0.0
    } else {
        slack - cgf - c * eta * mean_r
    };
    report.holds = c > 0.0 && report.margin >= 0.0;
    if !report.holds {
        report.reason = Some("cgf_exceeds_bound".into());
    }
    report
}

/// (η,c)-central check from a CGF value and the mean of `r`.
pub fn eta_c_check(cgf_value: f64, mean_r: f64, eta: f64) -> ConditionReport {
    central_report(cgf_value, mean_r, eta, 0.0)
}

/// Samples of `r(W, Z)` grouped into independent units.
///
/// Units are the resampling blocks of the bootstrap: a unit is one hypothesis
/// draw together with all test points it was evaluated on. Plain i.i.d.
/// samples are units of size one.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcessSamples {
    values: Vec<f64>,
    offsets: Vec<usize>,
}

impl ExcessSamples {
    pub fn iid(values: Vec<f64>) -> Result<Self> {
        let offsets = (0..=values.len()).collect();
        Self::new(values, offsets)
    }

    pub fn grouped(groups: Vec<Vec<f64>>) -> Result<Self> {
        let mut offsets = vec![0];
        for g in &groups {
            offsets.push(offsets.last().unwrap() + g.len());
        }
        Self::new(groups.concat(), offsets)
    }

    fn new(values: Vec<f64>, offsets: Vec<usize>) -> Result<Self> {
        if values.is_empty() {
            return invalid("no excess-loss samples");
        }
        if values.iter().any(|v| !v.is_finite()) {
            return invalid("excess-loss samples must be finite");
        }
        if offsets.windows(2).any(|w| w[1] <= w[0]) {
            return invalid("empty sample group");
        }
        Ok(ExcessSamples { values, offsets })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn units(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn unit(&self, g: usize) -> &[f64] {
        &self.values[self.offsets[g]..self.offsets[g + 1]]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Per-unit sums of `e^{-η(v - shift)}` and of `v`, plus unit sizes.
    fn unit_stats(&self, eta: f64, shift: f64) -> Vec<(f64, f64, f64)> {
        (0..self.units())
            .map(|g| {
                let u = self.unit(g);
                let e: f64 = u.iter().map(|v| (-eta * v - shift).exp()).sum();
                let s: f64 = u.iter().sum();
                (e, s, u.len() as f64)
            })
            .collect()
    }
}

/// Bootstrap settings for empirical checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bootstrap {
    pub resamples: usize,
    pub stream: RngStream,
}

impl Bootstrap {
    pub fn new(stream: RngStream) -> Self {
        Bootstrap {
            resamples: 1000,
            stream,
        }
    }
}

fn percentile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Empirical (η,c)-central check with a unit-level bootstrap.
///
/// The reported `c` is the lower 2.5% bootstrap quantile of `max_c`, so the
/// condition holds empirically only when that conservative `c` is positive
/// and the point-estimate margin at it is non-negative.
pub fn eta_c_check_samples(samples: &ExcessSamples, eta: f64, boot: Bootstrap) -> Result<ConditionReport> {
    empirical_central(samples, eta, 0.0, boot)
}

fn empirical_central(samples: &ExcessSamples, eta: f64, slack: f64, boot: Bootstrap) -> Result<ConditionReport> {
    if !(eta > 0.0) || !eta.is_finite() {
        return invalid(format!("eta must be finite and > 0, got {eta}"));
    }
    if boot.resamples < 2 {
        return invalid("bootstrap needs at least 2 resamples");
    }
    let shift = samples.values.iter().map(|v| -eta * v).fold(f64::NEG_INFINITY, f64::max);
    let stats = samples.unit_stats(eta, shift);
    let summarize = |weights: &dyn Fn(usize) -> f64| {
        let (mut e, mut s, mut m) = (0.0, 0.0, 0.0);
        for (g, st) in stats.iter().enumerate() {
            let w = weights(g);
            e += w * st.0;
            s += w * st.1;
            m += w * st.2;
        }
        (shift + (e / m).ln(), s / m)
    };
    let (cgf, mean_r) = summarize(&|_| 1.0);
    let point = central_report(cgf, mean_r, eta, slack);
    let units = stats.len();
    let mut boot_c: Vec<f64> = (0..boot.resamples as u64)
        .into_par_iter()
        .map(|b| {
            let mut rng = RngStream::new(boot.stream.master_seed, boot.stream.stream_index ^ (b << 32)).rng();
            let mut counts = vec![0u32; units];
            for _ in 0..units {
                counts[rng.gen_range(0..units)] += 1;
            }
            let (cg, mr) = summarize(&|g| counts[g] as f64);
            if mr > 0.0 {
                ((slack - cg) / (eta * mr)).clamp(0.0, 1.0)
            } else {
                0.0
            }
        })
        .collect();
    boot_c.sort_by(f64::total_cmp);
    let lo = percentile(&boot_c, 0.025);
    let hi = percentile(&boot_c, 0.975);

    let mut report = point.clone();
    report.source = Source::Empirical;
    report.sample_count = Some(samples.len());
    report.ci_halfwidth = Some(0.5 * (hi - lo));
    report.max_c_ci = Some([lo, hi]);
    if mean_r > 0.0 {
        report.c = lo;
        report.margin = slack - cgf - lo * eta * mean_r;
        report.holds = lo > 0.0 && report.margin >= 0.0;
        report.reason = if report.holds {
            None
        } else {
            Some("bootstrap_lower_bound_not_positive".into())
        };
    }
    Ok(report)
}

/// Where a scan takes its CGF values from.
#[derive(Debug, Clone, Copy)]
pub enum CgfSource<'a> {
    ClosedForm { tuple: &'a LearningTuple, n: usize },
    Samples { samples: &'a ExcessSamples, bootstrap: Bootstrap },
}

fn closed_form_point(tuple: &LearningTuple, n: usize, eta: f64) -> Result<(f64, f64)> {
    let ev = CgfEvaluator::new(tuple, n, CgfKind::ExcessNeg)?;
    let cgf = match ev.eval(eta) {
        Ok(v) => v,
        // The moment generating function diverges past the domain boundary.
        Err(Error::Domain { .. }) if eta > 0.0 => f64::INFINITY,
        Err(e) => return Err(e),
    };
    Ok((cgf, excess_moments(tuple, n)?.mean))
}

/// (η,c)-central reports over a grid of `η`.
pub fn eta_c_scan(source: CgfSource<'_>, eta_grid: &[f64]) -> Result<Vec<ConditionReport>> {
    if eta_grid.iter().any(|e| !(*e > 0.0) || !e.is_finite()) {
        return invalid("eta grid entries must be finite and > 0");
    }
    eta_grid
        .iter()
        .map(|&eta| match source {
            CgfSource::ClosedForm { tuple, n } => {
                let (cgf, mean_r) = closed_form_point(tuple, n, eta)?;
                Ok(eta_c_check(cgf, mean_r, eta))
            }
            CgfSource::Samples { samples, bootstrap } => eta_c_check_samples(samples, eta, bootstrap),
        })
        .collect()
}

/// Moments of `r` for the Bernstein check.
#[derive(Debug, Clone, Copy)]
pub enum MomentSource<'a> {
    ClosedForm { tuple: &'a LearningTuple, n: usize },
    Samples(&'a [f64]),
}

/// Smallest Bernstein constant `B_min = E[r²] / E[r]^β`, and a report of
/// whether `B_min ≤ bound` when a bound is supplied.
pub fn bernstein_check(source: MomentSource<'_>, beta: f64, bound: Option<f64>) -> Result<(f64, ConditionReport)> {
    if !(0.0..=1.0).contains(&beta) {
        return invalid(format!("beta must lie in [0, 1], got {beta}"));
    }
    let (mean, second, count, src) = match source {
        MomentSource::ClosedForm { tuple, n } => {
            let m = excess_moments(tuple, n)?;
            (m.mean, m.second, None, Source::ClosedForm)
        }
        MomentSource::Samples(v) => {
            if v.is_empty() {
                return invalid("no samples for the Bernstein check");
            }
            let n = v.len() as f64;
            (
                v.iter().sum::<f64>() / n,
                v.iter().map(|x| x * x).sum::<f64>() / n,
                Some(v.len()),
                Source::Empirical,
            )
        }
    };
    let mut report = ConditionReport {
        condition: ConditionId::Bernstein,
        holds: false,
        max_c: None,
        eta: f64::NAN,
        c: f64::NAN,
        margin: f64::NAN,
        cgf: f64::NAN,
        mean_r: mean,
        epsilon: None,
        reason: None,
        source: src,
        sample_count: count,
        ci_halfwidth: None,
        max_c_ci: None,
    };
    if beta > 0.0 && !(mean > 0.0) {
        report.reason = Some(NONPOSITIVE_MEAN.into());
        return Ok((f64::NAN, report));
    }
    let b_min = if beta == 0.0 { second } else { second / mean.powf(beta) };
    match bound {
        Some(b) => {
            report.margin = b - b_min;
            report.holds = b_min <= b;
        }
        None => {
            report.margin = 0.0;
            report.holds = b_min.is_finite();
        }
    }
    Ok((b_min, report))
}

/// `κ(x) = (eˣ − x − 1)/x²`, with `κ(0) = 1/2`.
pub fn kappa(x: f64) -> f64 {
    if x.abs() < 1e-5 {
        0.5 + x / 6.0 + x * x / 24.0
    } else {
        (x.exp_m1() - x) / (x * x)
    }
}

/// Bernstein (β = 1, constant `B`) with `r ≥ -b` implies
/// `(min(1/b, 1/(2B(e−2))), 1/2)`-central.
pub fn bernstein_to_eta_c(b_const: f64, lower_bound_b: f64) -> Result<(f64, f64)> {
    if !(b_const > 0.0) || !(lower_bound_b > 0.0) {
        return invalid(format!(
            "Bernstein constant and lower bound must be > 0, got B = {b_const}, b = {lower_bound_b}"
        ));
    }
    let e2 = std::f64::consts::E - 2.0;
    Ok(((1.0 / lower_bound_b).min(1.0 / (2.0 * b_const * e2)), 0.5))
}

/// η-central plus `(u, c_w)`-witness implies `(η', c_w(1 − η'/η)/(η'u + 1))`-central.
pub fn central_witness_to_eta_c(eta: f64, u: f64, c_w: f64, eta_prime: f64) -> Result<(f64, f64)> {
    if !(eta > 0.0) || !(u > 0.0) || !(c_w > 0.0 && c_w <= 1.0) {
        return invalid(format!("need eta > 0, u > 0, c_w in (0, 1]; got {eta}, {u}, {c_w}"));
    }
    if !(eta_prime > 0.0 && eta_prime < eta) {
        return invalid(format!("eta' must lie in (0, eta) = (0, {eta}), got {eta_prime}"));
    }
    Ok((eta_prime, c_w * (1.0 - eta_prime / eta) / (eta_prime * u + 1.0)))
}

/// `(ν², α)`-sub-exponential `r` implies `(min(1/α, ν²/E[r]), 1/2)`-central.
pub fn subexp_to_eta_c(nu2: f64, alpha: f64, mean_r: f64) -> Result<(f64, f64)> {
    if !(mean_r > 0.0) {
        return invalid(format!("mean of r must be > 0, got {mean_r}"));
    }
    if !(nu2 > 0.0) || !(alpha >= 0.0) {
        return invalid(format!("need nu2 > 0 and alpha >= 0, got {nu2}, {alpha}"));
    }
    let inv_alpha = if alpha > 0.0 { 1.0 / alpha } else { f64::INFINITY };
    Ok((inv_alpha.min(nu2 / mean_r), 0.5))
}

/// `(ν², α)`-sub-Gamma `r` implies `(E[r]/(ν² + α E[r]), 1/2)`-central.
pub fn subgamma_to_eta_c(nu2: f64, alpha: f64, mean_r: f64) -> Result<(f64, f64)> {
    if !(mean_r > 0.0) {
        return invalid(format!("mean of r must be > 0, got {mean_r}"));
    }
    if !(nu2 >= 0.0) || !(alpha >= 0.0) || nu2 + alpha == 0.0 {
        return invalid(format!("need nu2, alpha >= 0 not both zero, got {nu2}, {alpha}"));
    }
    Ok((mean_r / (nu2 + alpha * mean_r), 0.5))
}

/// Rate function `v(ε) = scale · ε^{1−β}` (with `0⁰ = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VRate {
    pub beta: f64,
    pub scale: f64,
}

impl VRate {
    pub fn eval(&self, epsilon: f64) -> f64 {
        self.scale * epsilon.powf(1.0 - self.beta)
    }
}

/// (v,c)-central reports over a grid of slacks `ε`.
pub fn v_central_check(source: CgfSource<'_>, rate: VRate, epsilon_grid: &[f64]) -> Result<Vec<ConditionReport>> {
    if !(0.0..=1.0).contains(&rate.beta) || !(rate.scale > 0.0) {
        return invalid(format!("need beta in [0, 1] and scale > 0, got {:?}", rate));
    }
    epsilon_grid
        .iter()
        .map(|&eps| {
            if !(eps >= 0.0) || !eps.is_finite() {
                return invalid(format!("epsilon must be finite and >= 0, got {eps}"));
            }
            let v = rate.eval(eps);
            let mut report = if v <= 0.0 {
                let mut r = central_report(f64::NAN, f64::NAN, 0.0, 0.0);
                r.reason = Some("v(epsilon) = 0".into());
                r
            } else {
                match source {
                    CgfSource::ClosedForm { tuple, n } => {
                        let (cgf, mean_r) = closed_form_point(tuple, n, v)?;
                        central_report(cgf, mean_r, v, v * eps)
                    }
                    CgfSource::Samples { samples, bootstrap } => empirical_central(samples, v, v * eps, bootstrap)?,
                }
            };
            report.condition = ConditionId::VCCentral;
            report.epsilon = Some(eps);
            Ok(report)
        })
        .collect()
}

/// Diagnostic for the witness condition: `E[r·1{r ≤ u}] / E[r]` from samples.
/// The witness condition with constant `c_w` asks this ratio to be at least `c_w`.
pub fn witness_ratio(values: &[f64], u: f64) -> Result<f64> {
    if values.is_empty() {
        return invalid("no samples for the witness diagnostic");
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if !(mean > 0.0) {
        return invalid(format!("witness ratio needs E[r] > 0, got {mean}"));
    }
    let trunc = values.iter().filter(|&&v| v <= u).sum::<f64>() / n;
    Ok(trunc / mean)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learning::LearningTuple;
    use crate::models::cgf;

    #[test]
    fn empirical_cgf_basics() {
        assert_eq!(empirical_cgf(&[3.0; 7], 2.0).unwrap(), -6.0);
        assert_eq!(empirical_cgf(&[1.0, 5.0], 0.0).unwrap(), 0.0);
        assert!(empirical_cgf(&[], 1.0).is_err());
        let v = [0.3, -1.2, 4.0, 0.0];
        let shifted: Vec<f64> = v.iter().map(|x| x + 2.5).collect();
        let a = empirical_cgf(&shifted, 0.7).unwrap();
        let b = empirical_cgf(&v, 0.7).unwrap() - 0.7 * 2.5;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn gaussian_closed_form_max_c() {
        let g = LearningTuple::gaussian_mean(0.0, 1.0).unwrap();
        let r = &eta_c_scan(CgfSource::ClosedForm { tuple: &g, n: 100 }, &[0.25]).unwrap()[0];
        assert!(r.holds);
        assert!((r.max_c.unwrap() - 0.001_248_440_099_29 / 0.0025).abs() < 1e-10);
        assert!((r.max_c.unwrap() - 0.499_376).abs() < 1e-6);
    }

    #[test]
    fn counterexamples_fail() {
        let z = LearningTuple::zero_mean_discrete(1.0).unwrap();
        let r = eta_c_check(cgf(&z, 100, CgfKind::ExcessNeg, 0.5).unwrap(), 0.0, 0.5);
        assert!(!r.holds && r.reason.as_deref() == Some(NONPOSITIVE_MEAN));
        let s = LearningTuple::hypothesis_selection(0.0, 1.0).unwrap();
        let reports = eta_c_scan(CgfSource::ClosedForm { tuple: &s, n: 10 }, &[1.0]).unwrap();
        assert!(!reports[0].holds);
        assert!((reports[0].cgf - 0.934_701_664_001).abs() < 1e-11);
    }

    #[test]
    fn constant_samples_give_c_one() {
        let s = ExcessSamples::iid(vec![1.0; 50]).unwrap();
        for eta in [0.1, 1.0, 5.0] {
            let r = eta_c_check_samples(&s, eta, Bootstrap::new(RngStream::new(1, 0))).unwrap();
            assert_eq!(r.max_c, Some(1.0));
            assert!(r.holds);
        }
    }

    #[test]
    fn bernstein_values() {
        let g = LearningTuple::gaussian_mean(0.0, 1.0).unwrap();
        let (b, r) = bernstein_check(MomentSource::ClosedForm { tuple: &g, n: 100 }, 1.0, Some(7.0)).unwrap();
        assert!((b - 4.03).abs() < 1e-12 && r.holds);
        let (b0, _) = bernstein_check(MomentSource::Samples(&[1.0, -2.0]), 0.0, None).unwrap();
        assert_eq!(b0, 2.5);
        let (k, _) = bernstein_check(MomentSource::Samples(&[3.0; 4]), 1.0, None).unwrap();
        assert_eq!(k, 3.0);
        let (nan, r) = bernstein_check(MomentSource::Samples(&[1.0, -1.0]), 0.5, None).unwrap();
        assert!(nan.is_nan() && !r.holds);
    }

    #[test]
    fn implication_values() {
        let e = 1.0 / (2.0 * (std::f64::consts::E - 2.0));
        assert!((e - 0.696_105_595_589).abs() < 1e-11);
        assert_eq!(bernstein_to_eta_c(1.0, 1.0).unwrap(), (e, 0.5));
        assert_eq!(bernstein_to_eta_c(1.0, 0.1).unwrap(), (e, 0.5));
        assert!(bernstein_to_eta_c(1e12, 1.0).unwrap().0 < 1e-12);
        let (ep, c) = central_witness_to_eta_c(1.0, 1.0, 1.0, 0.5).unwrap();
        assert_eq!(ep, 0.5);
        assert!((c - 1.0 / 3.0).abs() < 1e-15);
        assert!(central_witness_to_eta_c(1.0, 1.0, 1.0, 1.0).is_err());
        assert!((central_witness_to_eta_c(1.0, 1.0, 0.7, 1e-9).unwrap().1 - 0.7).abs() < 1e-8);
        assert_eq!(subexp_to_eta_c(1.0, 2.0, 0.1).unwrap(), (0.5, 0.5));
        assert_eq!(subgamma_to_eta_c(1.0, 0.0, 0.1).unwrap(), (0.1, 0.5));
        assert!(subgamma_to_eta_c(1.0, 1e15, 0.1).unwrap().0 < 1e-14);
        assert!(subexp_to_eta_c(1.0, 1.0, 0.0).is_err());
        assert!((kappa(1e-7) - 0.5).abs() < 1e-7);
        assert!((kappa(1.0) - (std::f64::consts::E - 2.0)).abs() < 1e-15);
    }

    #[test]
    fn v_central_slack_helps() {
        let g = LearningTuple::gaussian_mean(0.0, 1.0).unwrap();
        let src = CgfSource::ClosedForm { tuple: &g, n: 100 };
        // v(ε) = 10ε with β = 0: η = 0.1 and slack v·ε = 0.001 at ε = 0.01.
        let v = v_central_check(src, VRate { beta: 0.0, scale: 10.0 }, &[0.01]).unwrap();
        let plain = eta_c_scan(src, &[0.1]).unwrap();
        assert!((v[0].eta - 0.1).abs() < 1e-15);
        assert!(v[0].holds && v[0].max_c.unwrap() > plain[0].max_c.unwrap());
        let one = v_central_check(src, VRate { beta: 1.0, scale: 1.0 }, &[0.0]).unwrap();
        let at1 = eta_c_scan(src, &[1.0]).unwrap();
        assert_eq!(one[0].max_c, at1[0].max_c);
        let big = v_central_check(src, VRate { beta: 0.5, scale: 1.0 }, &[10.0]).unwrap();
        assert_eq!(big[0].max_c, Some(1.0));
    }

    #[test]
    fn witness_ratio_basic() {
        assert_eq!(witness_ratio(&[1.0, 1.0, 10.0], 5.0).unwrap(), 2.0 / 12.0);
    }
}
