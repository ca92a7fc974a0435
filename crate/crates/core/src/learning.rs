//! Learning tuples, datasets and pointwise risk bookkeeping.
//!
//! A [`LearningTuple`] fixes the data law, the loss, the hypothesis space and
//! the algorithm. Everything downstream (samplers, closed forms, bounds)
//! dispatches on its [`ModelId`].

use crate::error::{invalid, Error, Result};
use crate::rng::RngStream;
use crate::special::softplus;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelId {
    GaussianMean,
    DiscreteMean,
    ZeroMeanDiscrete,
    LinearRegression,
    #[serde(alias = "logistic")]
    LogisticRegression,
    #[serde(alias = "selection")]
    HypothesisSelection,
}

impl ModelId {
    pub const ALL: [ModelId; 6] = [
        ModelId::GaussianMean,
        ModelId::DiscreteMean,
        ModelId::ZeroMeanDiscrete,
        ModelId::LinearRegression,
        ModelId::LogisticRegression,
        ModelId::HypothesisSelection,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelId::GaussianMean => "gaussian_mean",
            ModelId::DiscreteMean => "discrete_mean",
            ModelId::ZeroMeanDiscrete => "zero_mean_discrete",
            ModelId::LinearRegression => "linear_regression",
            ModelId::LogisticRegression => "logistic_regression",
            ModelId::HypothesisSelection => "hypothesis_selection",
        }
    }

    pub fn loss(self) -> LossKind {
        match self {
            ModelId::LogisticRegression => LossKind::CrossEntropy,
            ModelId::HypothesisSelection => LossKind::NegativeSelected,
            _ => LossKind::Squared,
        }
    }

    /// Loss is a function of the whole dataset rather than of one sample.
    pub fn dataset_level(self) -> bool {
        self == ModelId::HypothesisSelection
    }

    /// Population risk has no closed form; a held-out sample is required.
    pub fn needs_test_set(self) -> bool {
        self == ModelId::LogisticRegression
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian_mean" => Ok(ModelId::GaussianMean),
            "discrete_mean" => Ok(ModelId::DiscreteMean),
            "zero_mean_discrete" => Ok(ModelId::ZeroMeanDiscrete),
            "linear_regression" => Ok(ModelId::LinearRegression),
            "logistic_regression" | "logistic" => Ok(ModelId::LogisticRegression),
            "hypothesis_selection" | "selection" => Ok(ModelId::HypothesisSelection),
            other => invalid(format!(
                "unknown model '{other}' (expected one of gaussian_mean, discrete_mean, \
                 zero_mean_discrete, linear_regression, logistic_regression, hypothesis_selection)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    /// `(w - z)^2`, or `(y - w x)^2` for regression.
    Squared,
    /// Log-loss of a logistic model.
    CrossEntropy,
    /// `-z_w`, evaluated on the whole dataset.
    NegativeSelected,
}

/// Sign of the logistic label law `P(Y=1|x) = σ(s · xᵀw*)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelConvention {
    /// `s = -1`; the log-loss population minimiser is then `-w*`.
    #[default]
    AsPrinted,
    /// `s = +1`; the population minimiser is `w*`.
    Conventional,
}

impl LabelConvention {
    pub fn sign(self) -> f64 {
        match self {
            LabelConvention::AsPrinted => -1.0,
            LabelConvention::Conventional => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub mean: f64,
    pub noise_sd: f64,
    /// Fixed regression design; sample `i` uses `design[i % design.len()]`.
    pub design: Vec<f64>,
    pub dim: usize,
    pub w_star: Vec<f64>,
    pub hypothesis_radius: f64,
    pub reg_coeff: f64,
    pub reg_bound: f64,
    pub label_convention: LabelConvention,
}

impl ModelParams {
    pub fn defaults_for(model: ModelId) -> Self {
        let base = ModelParams {
            mean: 0.0,
            noise_sd: 1.0,
            design: vec![1.0],
            dim: 1,
            w_star: vec![0.0],
            hypothesis_radius: f64::INFINITY,
            reg_coeff: 0.0,
            reg_bound: 1.0,
            label_convention: LabelConvention::AsPrinted,
        };
        match model {
            ModelId::GaussianMean | ModelId::ZeroMeanDiscrete | ModelId::HypothesisSelection => base,
            ModelId::DiscreteMean => ModelParams {
                mean: 1.0,
                ..base
            },
            ModelId::LinearRegression => ModelParams {
                w_star: vec![1.0],
                ..base
            },
            ModelId::LogisticRegression => ModelParams {
                dim: 2,
                w_star: vec![0.5, 0.5],
                hypothesis_radius: 3.0,
                // g(w) = ‖w‖² on the radius-3 ball varies by at most 9.
                reg_bound: 9.0,
                ..base
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningTuple {
    pub model: ModelId,
    pub params: ModelParams,
}

impl LearningTuple {
    pub fn new(model: ModelId, params: ModelParams) -> Result<Self> {
        let t = LearningTuple { model, params };
        t.validate()?;
        Ok(t)
    }

    pub fn with_defaults(model: ModelId) -> Self {
        LearningTuple {
            model,
            params: ModelParams::defaults_for(model),
        }
    }

    pub fn gaussian_mean(mean: f64, noise_sd: f64) -> Result<Self> {
        let mut p = ModelParams::defaults_for(ModelId::GaussianMean);
        p.mean = mean;
        p.noise_sd = noise_sd;
        Self::new(ModelId::GaussianMean, p)
    }

    pub fn discrete_mean(mean: f64, noise_sd: f64) -> Result<Self> {
        let mut p = ModelParams::defaults_for(ModelId::DiscreteMean);
        p.mean = mean;
        p.noise_sd = noise_sd;
        Self::new(ModelId::DiscreteMean, p)
    }

    pub fn zero_mean_discrete(noise_sd: f64) -> Result<Self> {
        let mut p = ModelParams::defaults_for(ModelId::ZeroMeanDiscrete);
        p.noise_sd = noise_sd;
        Self::new(ModelId::ZeroMeanDiscrete, p)
    }

    pub fn linear_regression(design: Vec<f64>, w_star: f64, noise_sd: f64) -> Result<Self> {
        let mut p = ModelParams::defaults_for(ModelId::LinearRegression);
        p.design = design;
        p.w_star = vec![w_star];
        p.noise_sd = noise_sd;
        Self::new(ModelId::LinearRegression, p)
    }

    pub fn logistic(w_star: Vec<f64>, convention: LabelConvention) -> Result<Self> {
        let mut p = ModelParams::defaults_for(ModelId::LogisticRegression);
        p.dim = w_star.len();
        p.w_star = w_star;
        p.label_convention = convention;
        Self::new(ModelId::LogisticRegression, p)
    }

    pub fn hypothesis_selection(mean: f64, noise_sd: f64) -> Result<Self> {
        let mut p = ModelParams::defaults_for(ModelId::HypothesisSelection);
        p.mean = mean;
        p.noise_sd = noise_sd;
        Self::new(ModelId::HypothesisSelection, p)
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        let scalars = [
            ("mean", p.mean),
            ("noise_sd", p.noise_sd),
            ("reg_coeff", p.reg_coeff),
            ("reg_bound", p.reg_bound),
        ];
        for (name, v) in scalars {
            if !v.is_finite() {
                return invalid(format!("{name} must be finite, got {v}"));
            }
        }
        if p.noise_sd <= 0.0 {
            return invalid(format!("noise_sd must be > 0, got {}", p.noise_sd));
        }
        if p.reg_coeff < 0.0 {
            return invalid(format!("reg_coeff must be >= 0, got {}", p.reg_coeff));
        }
        if p.reg_bound <= 0.0 {
            return invalid(format!("reg_bound must be > 0, got {}", p.reg_bound));
        }
        if p.w_star.iter().any(|v| !v.is_finite()) || p.design.iter().any(|v| !v.is_finite()) {
            return invalid("w_star and design entries must be finite");
        }
        match self.model {
            ModelId::DiscreteMean if p.mean <= 0.0 => {
                invalid("discrete_mean needs mean > 0 (w* = 1); use zero_mean_discrete for mean 0")
            }
            ModelId::ZeroMeanDiscrete if p.mean != 0.0 => invalid("zero_mean_discrete fixes mean = 0"),
            ModelId::LinearRegression => {
                if p.design.is_empty() || p.design.iter().all(|x| *x == 0.0) {
                    return invalid("design must contain a non-zero entry");
                }
                if p.w_star.len() != 1 {
                    return invalid("linear_regression needs a scalar w_star");
                }
                Ok(())
            }
            ModelId::LogisticRegression => {
                if p.dim == 0 || p.w_star.len() != p.dim {
                    return invalid(format!(
                        "logistic w_star has length {} but dim = {}",
                        p.w_star.len(),
                        p.dim
                    ));
                }
                if !(p.hypothesis_radius > norm(&p.w_star)) {
                    return invalid(format!(
                        "hypothesis_radius {} must exceed ‖w*‖ = {}",
                        p.hypothesis_radius,
                        norm(&p.w_star)
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn loss(&self) -> LossKind {
        self.model.loss()
    }

    /// Length of one sample vector.
    pub fn sample_arity(&self) -> usize {
        match self.model {
            ModelId::LinearRegression => 2,
            ModelId::LogisticRegression => self.params.dim + 1,
            _ => 1,
        }
    }

    /// Length of a hypothesis vector.
    pub fn hypothesis_dim(&self) -> usize {
        match self.model {
            ModelId::LogisticRegression => self.params.dim,
            _ => 1,
        }
    }

    /// Population risk minimiser `w*` used as the reference in `r(w, z)`.
    pub fn w_star(&self) -> Vec<f64> {
        let p = &self.params;
        match self.model {
            ModelId::GaussianMean => vec![p.mean],
            ModelId::DiscreteMean | ModelId::ZeroMeanDiscrete => vec![1.0],
            ModelId::LinearRegression => p.w_star.clone(),
            ModelId::LogisticRegression => {
                let s = p.label_convention.sign();
                p.w_star.iter().map(|w| s * w).collect()
            }
            ModelId::HypothesisSelection => vec![0.0],
        }
    }

    /// Design point attached to sample index `i`.
    pub fn design_point(&self, i: usize) -> f64 {
        let d = &self.params.design;
        d[i % d.len()]
    }

    /// `Σ_{i<n} x_i²` over the tiled design.
    pub fn design_energy(&self, n: usize) -> f64 {
        (0..n).map(|i| self.design_point(i).powi(2)).sum()
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Samples stored row-major with a fixed arity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    arity: usize,
    values: Vec<f64>,
}

impl Dataset {
    pub fn new(arity: usize, values: Vec<f64>) -> Result<Self> {
        if arity == 0 {
            return invalid("dataset arity must be positive");
        }
        if values.is_empty() || values.len() % arity != 0 {
            return invalid(format!(
                "dataset of {} values is not a non-empty multiple of arity {arity}",
                values.len()
            ));
        }
        Ok(Dataset { arity, values })
    }

    pub fn from_samples(samples: &[Vec<f64>]) -> Result<Self> {
        let arity = samples.first().map(Vec::len).unwrap_or(0);
        if samples.iter().any(|s| s.len() != arity) {
            return invalid("all samples must share one arity");
        }
        Self::new(arity, samples.concat())
    }

    pub fn n(&self) -> usize {
        self.values.len() / self.arity
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn sample(&self, i: usize) -> &[f64] {
        &self.values[i * self.arity..(i + 1) * self.arity]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.arity)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// A hypothesis together with the dataset it was trained on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDraw {
    pub hypothesis: Vec<f64>,
    pub dataset: Dataset,
    pub seed: RngStream,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskRecord {
    pub population_risk: f64,
    pub empirical_risk: f64,
    pub excess_risk: f64,
    pub empirical_excess: f64,
    pub gen_error: f64,
}

/// Where population risks come from.
#[derive(Debug, Clone, Copy)]
pub enum Population<'a> {
    ClosedForm,
    TestSet(&'a Dataset),
}

fn check_hypothesis(tuple: &LearningTuple, w: &[f64]) -> Result<()> {
    if w.len() != tuple.hypothesis_dim() {
        return invalid(format!(
            "{} expects a hypothesis of length {}, got {}",
            tuple.model,
            tuple.hypothesis_dim(),
            w.len()
        ));
    }
    Ok(())
}

/// `ℓ(w, z)`. For the selection model `z` is the whole dataset and `w[0]` an index.
pub fn evaluate_loss(tuple: &LearningTuple, w: &[f64], z: &[f64]) -> Result<f64> {
    check_hypothesis(tuple, w)?;
    match tuple.model {
        ModelId::HypothesisSelection => {
            let idx = selection_index(w[0], z.len())?;
            Ok(-z[idx])
        }
        _ => {
            if z.len() != tuple.sample_arity() {
                return invalid(format!(
                    "{} samples have arity {}, got {}",
                    tuple.model,
                    tuple.sample_arity(),
                    z.len()
                ));
            }
            Ok(loss_unchecked(tuple.model, w, z))
        }
    }
}

fn selection_index(w: f64, n: usize) -> Result<usize> {
    if w < 0.0 || w.fract() != 0.0 || w as usize >= n {
        return invalid(format!("selection hypothesis {w} is not an index below {n}"));
    }
    Ok(w as usize)
}

/// Per-sample loss for non-selection models; arities already checked.
pub(crate) fn loss_unchecked(model: ModelId, w: &[f64], z: &[f64]) -> f64 {
    match model {
        ModelId::GaussianMean | ModelId::DiscreteMean | ModelId::ZeroMeanDiscrete => {
            (w[0] - z[0]).powi(2)
        }
        ModelId::LinearRegression => (z[1] - w[0] * z[0]).powi(2),
        ModelId::LogisticRegression => {
            let d = w.len();
            let a = dot(w, &z[..d]);
            softplus(a) - z[d] * a
        }
        ModelId::HypothesisSelection => unreachable!("selection loss is dataset level"),
    }
}

/// Pointwise excess loss `r(w, z) = ℓ(w, z) − ℓ(w*, z)`.
pub fn excess_loss(tuple: &LearningTuple, w: &[f64], z: &[f64]) -> Result<f64> {
    let ws = tuple.w_star();
    Ok(evaluate_loss(tuple, w, z)? - evaluate_loss(tuple, &ws, z)?)
}

/// Empirical risk `L̂(w, S)`.
pub fn empirical_risk(tuple: &LearningTuple, w: &[f64], data: &Dataset) -> Result<f64> {
    check_hypothesis(tuple, w)?;
    if tuple.model.dataset_level() {
        return evaluate_loss(tuple, w, data.values());
    }
    if data.arity() != tuple.sample_arity() {
        return invalid(format!(
            "{} samples have arity {}, dataset has {}",
            tuple.model,
            tuple.sample_arity(),
            data.arity()
        ));
    }
    let s: f64 = data.iter().map(|z| loss_unchecked(tuple.model, w, z)).sum();
    Ok(s / data.n() as f64)
}

/// Exact population risk `L_μ(w)` for models with a closed form.
///
/// `n` is the training-set size; the fixed-design regression averages over
/// the `n` design points it was trained on.
pub fn closed_form_population_risk(tuple: &LearningTuple, w: &[f64], n: usize) -> Result<f64> {
    check_hypothesis(tuple, w)?;
    let p = &tuple.params;
    let s2 = p.noise_sd * p.noise_sd;
    match tuple.model {
        ModelId::GaussianMean | ModelId::DiscreteMean | ModelId::ZeroMeanDiscrete => {
            Ok((w[0] - p.mean).powi(2) + s2)
        }
        ModelId::LinearRegression => {
            let mean_x2 = tuple.design_energy(n) / n as f64;
            Ok(s2 + (w[0] - p.w_star[0]).powi(2) * mean_x2)
        }
        ModelId::HypothesisSelection => {
            selection_index(w[0], n)?;
            Ok(-p.mean)
        }
        ModelId::LogisticRegression => Err(Error::Unsupported {
            what: "closed-form population risk",
            model: "logistic_regression",
            hint: "pass a held-out test set",
        }),
    }
}

fn population_risk(tuple: &LearningTuple, w: &[f64], n: usize, pop: Population<'_>) -> Result<f64> {
    match pop {
        Population::ClosedForm => closed_form_population_risk(tuple, w, n),
        Population::TestSet(test) => {
            if tuple.model.dataset_level() {
                // A fresh dataset S' of the same size plays the role of a population draw.
                return evaluate_loss(tuple, w, test.values());
            }
            empirical_risk(tuple, w, test)
        }
    }
}

/// Risk decomposition of one draw.
pub fn risk_record(tuple: &LearningTuple, draw: &JointDraw, pop: Population<'_>) -> Result<RiskRecord> {
    let n = draw.dataset.n();
    let w = &draw.hypothesis;
    let ws = tuple.w_star();
    let population_risk_w = population_risk(tuple, w, n, pop)?;
    let population_risk_star = population_risk(tuple, &ws, n, pop)?;
    let empirical_risk_w = empirical_risk(tuple, w, &draw.dataset)?;
    let empirical_risk_star = empirical_risk(tuple, &ws, &draw.dataset)?;
    Ok(RiskRecord {
        population_risk: population_risk_w,
        empirical_risk: empirical_risk_w,
        excess_risk: population_risk_w - population_risk_star,
        empirical_excess: empirical_risk_w - empirical_risk_star,
        gen_error: population_risk_w - empirical_risk_w,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn squared_loss_values() {
        let g = LearningTuple::gaussian_mean(0.0, 1.0).unwrap();
        assert_eq!(evaluate_loss(&g, &[0.0], &[0.0]).unwrap(), 0.0);
        assert_eq!(evaluate_loss(&g, &[1.0], &[3.0]).unwrap(), 4.0);
        assert_eq!(excess_loss(&g, &[1.0], &[2.0]).unwrap(), -3.0);
        assert!(evaluate_loss(&g, &[1.0, 2.0], &[3.0]).is_err());
    }

    #[test]
    fn logistic_loss_at_origin_is_ln2() {
        let t = LearningTuple::with_defaults(ModelId::LogisticRegression);
        for z in [[0.3, -2.0, 1.0], [5.0, 1.0, 0.0], [-40.0, 80.0, 1.0]] {
            assert!((evaluate_loss(&t, &[0.0, 0.0], &z).unwrap() - LN_2).abs() < 1e-15);
        }
        // Large margins stay finite.
        assert!(evaluate_loss(&t, &[3.0, 0.0], &[1e6, 0.0, 0.0]).unwrap().is_finite());
    }

    #[test]
    fn discrete_excess_is_four_z() {
        let t = LearningTuple::with_defaults(ModelId::DiscreteMean);
        for z in [-1.5, 0.0, 0.7, 3.0] {
            assert!((excess_loss(&t, &[-1.0], &[z]).unwrap() - 4.0 * z).abs() < 1e-12);
        }
    }

    #[test]
    fn excess_at_w_star_is_zero() {
        for m in ModelId::ALL {
            let t = LearningTuple::with_defaults(m);
            let z: Vec<f64> = (0..t.sample_arity().max(3)).map(|i| 0.3 * i as f64 - 0.2).collect();
            let z = if m.dataset_level() { z } else { z[..t.sample_arity()].to_vec() };
            assert_eq!(excess_loss(&t, &t.w_star(), &z).unwrap(), 0.0, "{m}");
        }
    }

    #[test]
    fn logistic_w_star_follows_convention() {
        let printed = LearningTuple::logistic(vec![0.5, 0.5], LabelConvention::AsPrinted).unwrap();
        let conv = LearningTuple::logistic(vec![0.5, 0.5], LabelConvention::Conventional).unwrap();
        assert_eq!(printed.w_star(), vec![-0.5, -0.5]);
        assert_eq!(conv.w_star(), vec![0.5, 0.5]);
    }

    #[test]
    fn validation_rejects_bad_params() {
        assert!(LearningTuple::gaussian_mean(0.0, 0.0).is_err());
        assert!(LearningTuple::gaussian_mean(f64::NAN, 1.0).is_err());
        assert!(LearningTuple::linear_regression(vec![0.0, 0.0], 1.0, 1.0).is_err());
        let mut p = ModelParams::defaults_for(ModelId::LogisticRegression);
        p.hypothesis_radius = 0.5;
        assert!(LearningTuple::new(ModelId::LogisticRegression, p).is_err());
    }

    #[test]
    fn risk_record_at_optimum() {
        let t = LearningTuple::gaussian_mean(0.0, 1.0).unwrap();
        let data = Dataset::new(1, vec![0.5, -0.5, 1.0]).unwrap();
        let draw = JointDraw {
            hypothesis: vec![0.0],
            dataset: data,
            seed: RngStream::new(0, 0),
        };
        let r = risk_record(&t, &draw, Population::ClosedForm).unwrap();
        assert_eq!(r.excess_risk, 0.0);
        assert_eq!(r.empirical_excess, 0.0);
        assert!((r.gen_error - (r.population_risk - r.empirical_risk)).abs() < 1e-12);
    }

    #[test]
    fn empty_test_set_rejected() {
        assert!(Dataset::new(3, vec![]).is_err());
        assert!(Dataset::new(2, vec![1.0, 2.0, 3.0]).is_err());
    }
}
