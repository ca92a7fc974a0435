//! Exact expectations, mutual informations and sub-Gaussian proxies.

use crate::error::{invalid, Error, Result};
use crate::learning::{LearningTuple, ModelId};
use crate::special::{gaussian_expectation, h2, normal_cdf, normal_pdf, q_function};
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

/// How `mi_per_sample` relates to the true `I(W; Z_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MiKind {
    /// Analytic expression.
    Exact,
    /// One-dimensional Gaussian quadrature of an exact expression.
    Quadrature,
    /// One-sided (upper) bound.
    UpperBound,
    /// Only `I(W; S_n)` is defined; `mi_per_sample` is empty.
    DatasetLevel,
    /// No closed form.
    Unavailable,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFlags {
    /// `n` is below `validity_min_n`.
    pub proxy_uncertified: bool,
    /// No closed forms exist; every numeric field is NaN.
    pub monte_carlo_only: bool,
    pub dataset_level: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormReport {
    pub model: ModelId,
    pub n: usize,
    pub gen_error: f64,
    pub excess: f64,
    pub empirical_excess: f64,
    pub mi_per_sample: Vec<f64>,
    pub mi_kind: MiKind,
    pub mi_total: Option<f64>,
    /// Sub-Gaussian proxy σ of `r(W, Z)` under `P_W ⊗ μ`.
    pub subgaussian_proxy_excess: Option<f64>,
    /// Sub-Gaussian proxy σ of `ℓ(W, Z)` under `P_W ⊗ μ`.
    pub subgaussian_proxy_loss: Option<f64>,
    pub validity_min_n: Option<usize>,
    pub flags: ReportFlags,
}

impl ClosedFormReport {
    pub fn mean_mi(&self) -> f64 {
        self.mi_per_sample.iter().sum::<f64>() / self.mi_per_sample.len() as f64
    }
}

/// Threshold `T` such that `r` is `√(8σ⁴/n)`-sub-Gaussian at `η` for all `n > T`.
pub fn subgaussian_validity_threshold(sigma: f64, eta: f64) -> f64 {
    let s2 = sigma * sigma;
    let a = eta * eta * s2 * s2;
    let first = (4.0 * a + eta * s2) * (2.0 * a + eta * s2) / a;
    let second = 4.0 * a + 2.0 * eta * s2;
    first.max(second)
}

/// Smallest integer strictly above the threshold, at the certification `η = 1/(4σ²)`.
fn gaussian_min_n(sigma: f64) -> usize {
    let t = subgaussian_validity_threshold(sigma, 0.25 / (sigma * sigma));
    t.floor() as usize + 1
}

/// `q = P(W = -1)` for the sign rule.
pub(crate) fn sign_rule_flip_probability(tuple: &LearningTuple, n: usize) -> f64 {
    let p = &tuple.params;
    q_function((n as f64).sqrt() * p.mean / p.noise_sd)
}

/// `I(W; Z_i)` for the sign rule by quadrature:
/// `h₂(P(W=1)) − E_Z[h₂(P(W=1 | Z_i = Z))]`.
pub fn discrete_mean_mi_quadrature(n: usize, mean: f64, noise_sd: f64) -> Result<f64> {
    if n < 2 {
        return invalid("per-sample MI of the sign rule needs n >= 2");
    }
    let nf = n as f64;
    let q = q_function(nf.sqrt() * mean / noise_sd);
    let scale = noise_sd * (nf - 1.0).sqrt();
    let cond = gaussian_expectation(|u| {
        let z = mean + noise_sd * u;
        h2(q_function((z + (nf - 1.0) * mean) / scale))
    });
    Ok((h2(q) - cond).max(0.0))
}

/// One-sided closed form obtained by pushing the conditional mean through `h₂∘Q`.
fn discrete_mean_mi_upper(n: usize, mean: f64, noise_sd: f64) -> f64 {
    let nf = n as f64;
    let q = q_function(nf.sqrt() * mean / noise_sd);
    // m = E[Z | Z > -(n-1)μ] for Z ~ N(μ, σ²).
    let a = -nf * mean / noise_sd;
    let m = mean + noise_sd * normal_pdf(a) / q_function(a);
    let arg = (m + (nf - 1.0) * mean) / (noise_sd * (nf - 1.0).sqrt());
    (h2(q) - h2(q_function(arg))).max(0.0)
}

fn zero_mean_mi(n: usize) -> f64 {
    if n == 1 {
        return LN_2;
    }
    let s = ((n - 1) as f64).sqrt();
    (LN_2 - gaussian_expectation(|u| h2(normal_cdf(u / s)))).max(0.0)
}

/// `E[max of n standard normals]`.
fn expected_max_std_normal(n: usize) -> f64 {
    let k = n as f64;
    gaussian_expectation(|u| u * k * normal_cdf(u).powi(n as i32 - 1))
}

/// First two moments of `r(W, Z)` under `P_W ⊗ μ` (sample 0 for the fixed design).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcessMoments {
    pub mean: f64,
    pub second: f64,
}

pub fn excess_moments(tuple: &LearningTuple, n: usize) -> Result<ExcessMoments> {
    if n == 0 {
        return invalid("n must be positive");
    }
    let p = &tuple.params;
    let s2 = p.noise_sd * p.noise_sd;
    let nf = n as f64;
    let (mean, second) = match tuple.model {
        ModelId::GaussianMean => (s2 / nf, 3.0 * s2 * s2 / (nf * nf) + 4.0 * s2 * s2 / nf),
        ModelId::LinearRegression => {
            let a = tuple.design_point(0).powi(2) / tuple.design_energy(n);
            (s2 * a, 3.0 * s2 * s2 * a * a + 4.0 * s2 * s2 * a)
        }
        ModelId::DiscreteMean | ModelId::ZeroMeanDiscrete => {
            let q = sign_rule_flip_probability(tuple, n);
            (4.0 * p.mean * q, 16.0 * q * (s2 + p.mean * p.mean))
        }
        ModelId::HypothesisSelection => (0.0, (nf - 1.0) / nf * 2.0 * s2),
        ModelId::LogisticRegression => {
            return Err(Error::Unsupported {
                what: "closed-form moments",
                model: "logistic_regression",
                hint: "estimate them from Monte-Carlo samples",
            })
        }
    };
    Ok(ExcessMoments { mean, second })
}

/// Every closed-form quantity of `tuple` at sample size `n`.
pub fn closed_form(tuple: &LearningTuple, n: usize) -> Result<ClosedFormReport> {
    tuple.validate()?;
    if n == 0 {
        return invalid("n must be positive");
    }
    let p = &tuple.params;
    if p.reg_coeff != 0.0 && tuple.model != ModelId::LogisticRegression {
        return Err(Error::Unsupported {
            what: "closed forms",
            model: tuple.model.name(),
            hint: "closed forms cover the unregularised ERM only; use Monte-Carlo",
        });
    }
    let sigma = p.noise_sd;
    let s2 = sigma * sigma;
    let nf = n as f64;
    let mut flags = ReportFlags::default();
    let report = match tuple.model {
        ModelId::GaussianMean => {
            if n < 2 {
                return invalid("gaussian_mean closed forms need n >= 2 (I(W;Z_1) is infinite at n = 1)");
            }
            let min_n = gaussian_min_n(sigma);
            flags.proxy_uncertified = n < min_n;
            let sw2 = (nf + 1.0) / nf * s2;
            ClosedFormReport {
                model: tuple.model,
                n,
                gen_error: 2.0 * s2 / nf,
                excess: s2 / nf,
                empirical_excess: -s2 / nf,
                mi_per_sample: vec![0.5 * (nf / (nf - 1.0)).ln(); n],
                mi_kind: MiKind::Exact,
                mi_total: None,
                subgaussian_proxy_excess: Some((8.0 * s2 * s2 / nf).sqrt()),
                subgaussian_proxy_loss: Some(2f64.sqrt() * sw2),
                validity_min_n: Some(min_n),
                flags,
            }
        }
        ModelId::LinearRegression => {
            let energy = tuple.design_energy(n);
            let mut mi = Vec::with_capacity(n);
            let mut max_a: f64 = 0.0;
            for i in 0..n {
                let x2 = tuple.design_point(i).powi(2);
                if energy - x2 <= 0.0 {
                    return invalid(format!(
                        "design needs Σ_(j≠i) x_j² > 0 for every i; fails at i = {i} with n = {n}"
                    ));
                }
                mi.push(0.5 * (energy / (energy - x2)).ln());
                max_a = max_a.max(x2 / energy);
            }
            let min_n = linear_regression_min_n(tuple, sigma);
            flags.proxy_uncertified = min_n.map_or(true, |m| n < m);
            ClosedFormReport {
                model: tuple.model,
                n,
                gen_error: 2.0 * s2 / nf,
                excess: s2 / nf,
                empirical_excess: -s2 / nf,
                mi_per_sample: mi,
                mi_kind: MiKind::Exact,
                mi_total: None,
                subgaussian_proxy_excess: Some((8.0 * s2 * s2 * max_a).sqrt()),
                subgaussian_proxy_loss: Some(2f64.sqrt() * s2 * (1.0 + max_a)),
                validity_min_n: min_n,
                flags,
            }
        }
        ModelId::DiscreteMean => {
            if n < 2 {
                return invalid("discrete_mean closed forms need n >= 2");
            }
            let mu = p.mean;
            let t = nf.sqrt() * mu / sigma;
            let q = q_function(t);
            let s = sigma / nf.sqrt();
            let gen = 4.0 * s * normal_pdf(t);
            let excess = 4.0 * mu * q;
            ClosedFormReport {
                model: tuple.model,
                n,
                gen_error: gen,
                excess,
                empirical_excess: excess - gen,
                mi_per_sample: vec![discrete_mean_mi_upper(n, mu, sigma); n],
                mi_kind: MiKind::UpperBound,
                mi_total: Some(h2(q)),
                subgaussian_proxy_excess: None,
                subgaussian_proxy_loss: None,
                validity_min_n: None,
                flags,
            }
        }
        ModelId::ZeroMeanDiscrete => {
            let gen = (8.0 * s2 / (std::f64::consts::PI * nf)).sqrt();
            ClosedFormReport {
                model: tuple.model,
                n,
                gen_error: gen,
                excess: 0.0,
                empirical_excess: -gen,
                mi_per_sample: vec![zero_mean_mi(n); n],
                mi_kind: MiKind::Quadrature,
                mi_total: Some(LN_2),
                // ln(½ + ½e^{8η²σ²}) ≤ 8η²σ² = (4σ)²η²/2.
                subgaussian_proxy_excess: Some(4.0 * sigma),
                subgaussian_proxy_loss: None,
                validity_min_n: None,
                flags,
            }
        }
        ModelId::HypothesisSelection => {
            flags.dataset_level = true;
            let gen = sigma * expected_max_std_normal(n);
            ClosedFormReport {
                model: tuple.model,
                n,
                gen_error: gen,
                excess: 0.0,
                empirical_excess: -gen,
                mi_per_sample: Vec::new(),
                mi_kind: MiKind::DatasetLevel,
                mi_total: Some(nf.ln()),
                // ln(1/n + (n-1)/n·e^{σ²η²}) ≤ σ²η² = (√2σ)²η²/2.
                subgaussian_proxy_excess: Some(2f64.sqrt() * sigma),
                subgaussian_proxy_loss: Some(sigma),
                validity_min_n: None,
                flags,
            }
        }
        ModelId::LogisticRegression => {
            flags.monte_carlo_only = true;
            ClosedFormReport {
                model: tuple.model,
                n,
                gen_error: f64::NAN,
                excess: f64::NAN,
                empirical_excess: f64::NAN,
                mi_per_sample: Vec::new(),
                mi_kind: MiKind::Unavailable,
                mi_total: None,
                subgaussian_proxy_excess: None,
                subgaussian_proxy_loss: None,
                validity_min_n: None,
                flags,
            }
        }
    };
    Ok(report)
}

/// Fixed-design analogue of the Gaussian threshold with `n` replaced by `S/x_i²`.
fn linear_regression_min_n(tuple: &LearningTuple, sigma: f64) -> Option<usize> {
    let t = subgaussian_validity_threshold(sigma, 0.25 / (sigma * sigma));
    (2..=1_000_000usize).find(|&n| {
        let energy = tuple.design_energy(n);
        (0..n.min(tuple.params.design.len())).all(|i| {
            let x2 = tuple.design_point(i).powi(2);
            x2 == 0.0 || energy / x2 > t
        })
    })
}
