//! The six analytic learning problems: samplers, ERM solvers, closed forms and CGFs.
//!
//! | model | data | hypotheses | algorithm |
//! |---|---|---|---|
//! | `gaussian_mean` | `Z ~ N(μ, σ²)` | `ℝ` | sample mean |
//! | `discrete_mean` | `Z ~ N(μ, σ²)`, `μ > 0` | `{-1, 1}` | sign of the sample mean |
//! | `zero_mean_discrete` | `Z ~ N(0, σ²)` | `{-1, 1}` | sign of the sample mean |
//! | `linear_regression` | `y_i = w* x_i + ε_i`, fixed design | `ℝ` | least squares |
//! | `logistic_regression` | `x ~ N(0, I)`, Bernoulli labels | `‖w‖ < R` | log-loss ERM |
//! | `hypothesis_selection` | `Z_i ~ N(μ, σ²)` | `{0, …, n-1}` | `argmax_i Z_i` |

mod cgf;
mod closed_form;
mod logistic;

pub use cgf::{cgf, CgfEvaluator, CgfKind};
pub use closed_form::{
    closed_form, discrete_mean_mi_quadrature, excess_moments, subgaussian_validity_threshold,
    ClosedFormReport, ExcessMoments, MiKind, ReportFlags,
};
pub use logistic::LOGISTIC_MAX_ITER;

use crate::error::{invalid, Result};
use crate::learning::{Dataset, JointDraw, LearningTuple, ModelId};
use crate::rng::RngStream;
use crate::special::sigmoid;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Draw `n` i.i.d. samples (fixed design for regression).
pub fn sample_dataset<R: Rng + ?Sized>(tuple: &LearningTuple, n: usize, rng: &mut R) -> Result<Dataset> {
    if n == 0 {
        return invalid("sample_dataset needs n >= 1");
    }
    let p = &tuple.params;
    let arity = tuple.sample_arity();
    let mut values = Vec::with_capacity(n * arity);
    match tuple.model {
        ModelId::GaussianMean
        | ModelId::DiscreteMean
        | ModelId::ZeroMeanDiscrete
        | ModelId::HypothesisSelection => {
            for _ in 0..n {
                let u: f64 = rng.sample(StandardNormal);
                values.push(p.mean + p.noise_sd * u);
            }
        }
        ModelId::LinearRegression => {
            for i in 0..n {
                let x = tuple.design_point(i);
                let u: f64 = rng.sample(StandardNormal);
                values.push(x);
                values.push(p.w_star[0] * x + p.noise_sd * u);
            }
        }
        ModelId::LogisticRegression => {
            let s = p.label_convention.sign();
            for _ in 0..n {
                let start = values.len();
                for _ in 0..p.dim {
                    values.push(rng.sample::<f64, _>(StandardNormal));
                }
                let a: f64 = values[start..].iter().zip(&p.w_star).map(|(x, w)| x * w).sum();
                let y = if rng.gen::<f64>() < sigmoid(s * a) { 1.0 } else { 0.0 };
                values.push(y);
            }
        }
    }
    Dataset::new(arity, values)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErmFit {
    pub hypothesis: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

impl ErmFit {
    fn exact(hypothesis: Vec<f64>) -> Self {
        ErmFit {
            hypothesis,
            converged: true,
            iterations: 0,
        }
    }
}

/// (Regularised) empirical risk minimiser. The regulariser is `(λ/n) g(w)`
/// with `g(w) = ‖w‖²`, which is constant on `{-1, 1}` and on index sets.
pub fn erm(tuple: &LearningTuple, data: &Dataset) -> Result<ErmFit> {
    if data.arity() != tuple.sample_arity() {
        return invalid(format!(
            "{} expects samples of arity {}, dataset has {}",
            tuple.model,
            tuple.sample_arity(),
            data.arity()
        ));
    }
    let n = data.n() as f64;
    let lambda = tuple.params.reg_coeff;
    match tuple.model {
        ModelId::GaussianMean => {
            let s: f64 = data.values().iter().sum();
            Ok(ErmFit::exact(vec![s / (n + lambda)]))
        }
        ModelId::DiscreteMean | ModelId::ZeroMeanDiscrete => {
            let mean = data.values().iter().sum::<f64>() / n;
            Ok(ErmFit::exact(vec![if mean >= 0.0 { 1.0 } else { -1.0 }]))
        }
        ModelId::LinearRegression => {
            let (sxy, sxx) = data
                .iter()
                .fold((0.0, 0.0), |(a, b), z| (a + z[0] * z[1], b + z[0] * z[0]));
            Ok(ErmFit::exact(vec![sxy / (sxx + lambda)]))
        }
        ModelId::LogisticRegression => logistic::fit(tuple, data),
        ModelId::HypothesisSelection => {
            // First maximal index wins ties.
            let (idx, _) = data
                .values()
                .iter()
                .enumerate()
                .fold((0usize, f64::NEG_INFINITY), |best, (i, &z)| if z > best.1 { (i, z) } else { best });
            Ok(ErmFit::exact(vec![idx as f64]))
        }
    }
}

/// Sample a dataset from `stream` and train on it.
pub fn train(tuple: &LearningTuple, n: usize, stream: RngStream) -> Result<(JointDraw, ErmFit)> {
    let mut rng = stream.rng();
    let dataset = sample_dataset(tuple, n, &mut rng)?;
    let fit = erm(tuple, &dataset)?;
    let draw = JointDraw {
        hypothesis: fit.hypothesis.clone(),
        dataset,
        seed: stream,
    };
    Ok((draw, fit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learning::LabelConvention;

    #[test]
    fn erm_closed_solutions() {
        let g = LearningTuple::gaussian_mean(0.0, 1.0).unwrap();
        let d = Dataset::new(1, vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(erm(&g, &d).unwrap().hypothesis, vec![2.0]);

        let dm = LearningTuple::with_defaults(ModelId::DiscreteMean);
        let d = Dataset::new(1, vec![-0.3, 0.1]).unwrap();
        assert_eq!(erm(&dm, &d).unwrap().hypothesis, vec![-1.0]);
        let d = Dataset::new(1, vec![0.0]).unwrap();
        assert_eq!(erm(&dm, &d).unwrap().hypothesis, vec![1.0]);

        let lr = LearningTuple::linear_regression(vec![1.0, 2.0, -3.0], 2.0, 1.0).unwrap();
        let d = Dataset::new(2, vec![1.0, 2.0, 2.0, 4.0, -3.0, -6.0]).unwrap();
        assert!((erm(&lr, &d).unwrap().hypothesis[0] - 2.0).abs() < 1e-15);

        let sel = LearningTuple::hypothesis_selection(0.0, 1.0).unwrap();
        let d = Dataset::new(1, vec![0.1, 0.9, 0.9, -1.0]).unwrap();
        assert_eq!(erm(&sel, &d).unwrap().hypothesis, vec![1.0]);
    }

    #[test]
    fn gaussian_sampler_mean() {
        let g = LearningTuple::gaussian_mean(0.7, 2.0).unwrap();
        let mut rng = RngStream::new(11, 0).rng();
        let d = sample_dataset(&g, 1_000_000, &mut rng).unwrap();
        let m = d.values().iter().sum::<f64>() / 1e6;
        assert!((m - 0.7).abs() < 4.0 * 2.0 / 1e3, "mean {m}");
    }

    #[test]
    fn design_used_once_each() {
        let design: Vec<f64> = (1..=10).map(|i| i as f64 * 0.5).collect();
        let t = LearningTuple::linear_regression(design.clone(), 1.0, 1.0).unwrap();
        let d = sample_dataset(&t, 10, &mut RngStream::new(1, 1).rng()).unwrap();
        let xs: Vec<f64> = d.iter().map(|z| z[0]).collect();
        assert_eq!(xs, design);
        assert!(sample_dataset(&t, 0, &mut RngStream::new(1, 1).rng()).is_err());
    }

    #[test]
    fn logistic_labels_balanced_on_decision_boundary() {
        // With x ⟂ w*, P(Y=1|x) = σ(0) = 1/2 under either convention.
        let t = LearningTuple::logistic(vec![0.5, 0.5], LabelConvention::AsPrinted).unwrap();
        let mut rng = RngStream::new(5, 0).rng();
        let (mut ones, mut total) = (0usize, 0usize);
        while total < 10_000 {
            let d = sample_dataset(&t, 1000, &mut rng).unwrap();
            for z in d.iter() {
                if (z[0] + z[1]).abs() < 0.02 {
                    total += 1;
                    ones += (z[2] == 1.0) as usize;
                }
            }
        }
        let p = ones as f64 / total as f64;
        assert!((p - 0.5).abs() < 0.02, "p = {p}");
    }

    #[test]
    fn train_is_reproducible() {
        let t = LearningTuple::with_defaults(ModelId::LogisticRegression);
        let a = train(&t, 50, RngStream::new(3, 9)).unwrap();
        let b = train(&t, 50, RngStream::new(3, 9)).unwrap();
        assert_eq!(a, b);
    }
}
