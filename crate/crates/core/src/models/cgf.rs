//! Exact cumulant generating functions under the product law `P_W ⊗ μ`.
//!
//! `excess_neg(η) = ln E e^{-η r(W,Z)}`, `excess_pos(η) = ln E e^{η r(W,Z)}`,
//! and likewise for the loss. All are uncentered and defined for `η ≥ 0`.

use super::closed_form::sign_rule_flip_probability;
use crate::error::{invalid, Error, Result};
use crate::learning::{LearningTuple, ModelId};
use crate::special::log_sum_exp_weighted;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CgfKind {
    ExcessNeg,
    ExcessPos,
    LossNeg,
    LossPos,
}

impl CgfKind {
    pub fn name(self) -> &'static str {
        match self {
            CgfKind::ExcessNeg => "excess_neg",
            CgfKind::ExcessPos => "excess_pos",
            CgfKind::LossNeg => "loss_neg",
            CgfKind::LossPos => "loss_pos",
        }
    }
}

/// A closed-form CGF bound to a model, sample size and sample index.
#[derive(Debug, Clone)]
pub struct CgfEvaluator {
    tuple: LearningTuple,
    n: usize,
    kind: CgfKind,
    sample: usize,
    /// Half-open domain `[0, upper)`.
    upper: f64,
}

impl CgfEvaluator {
    pub fn new(tuple: &LearningTuple, n: usize, kind: CgfKind) -> Result<Self> {
        Self::for_sample(tuple, n, kind, 0)
    }

    /// Per-sample CGF; only the fixed-design regression depends on `sample`.
    pub fn for_sample(tuple: &LearningTuple, n: usize, kind: CgfKind, sample: usize) -> Result<Self> {
        tuple.validate()?;
        if n == 0 || sample >= n {
            return invalid(format!("need 0 <= sample < n, got sample {sample}, n {n}"));
        }
        if tuple.model == ModelId::LogisticRegression {
            return Err(Error::Unsupported {
                what: "closed-form CGF",
                model: "logistic_regression",
                hint: "use conditions::empirical_cgf on Monte-Carlo samples",
            });
        }
        if tuple.params.reg_coeff != 0.0 {
            return Err(Error::Unsupported {
                what: "closed-form CGF",
                model: tuple.model.name(),
                hint: "closed forms cover the unregularised ERM only",
            });
        }
        let mut ev = CgfEvaluator {
            tuple: tuple.clone(),
            n,
            kind,
            sample,
            upper: f64::INFINITY,
        };
        ev.upper = ev.domain_upper();
        Ok(ev)
    }

    pub fn kind(&self) -> CgfKind {
        self.kind
    }

    /// `(0, upper)`: η must satisfy `0 <= η < upper`.
    pub fn domain(&self) -> (f64, f64) {
        (0.0, self.upper)
    }

    fn s2(&self) -> f64 {
        self.tuple.params.noise_sd.powi(2)
    }

    /// `x_i² / S` for regression, `1/n` for the Gaussian mean.
    fn leverage(&self) -> f64 {
        match self.tuple.model {
            ModelId::LinearRegression => {
                self.tuple.design_point(self.sample).powi(2) / self.tuple.design_energy(self.n)
            }
            _ => 1.0 / self.n as f64,
        }
    }

    fn domain_upper(&self) -> f64 {
        let s2 = self.s2();
        match (self.tuple.model, self.kind) {
            (ModelId::GaussianMean | ModelId::LinearRegression, k) => {
                let a = self.leverage();
                match k {
                    // 1 - (4η²σ⁴ ∓ 2ησ²)·a > 0
                    CgfKind::ExcessNeg => (1.0 + (1.0 + 4.0 / a).sqrt()) / (4.0 * s2),
                    CgfKind::ExcessPos => (-1.0 + (1.0 + 4.0 / a).sqrt()) / (4.0 * s2),
                    CgfKind::LossNeg => f64::INFINITY,
                    CgfKind::LossPos => 1.0 / (2.0 * s2 * (1.0 + a)),
                }
            }
            (ModelId::DiscreteMean | ModelId::ZeroMeanDiscrete, CgfKind::LossPos) => 1.0 / (2.0 * s2),
            _ => f64::INFINITY,
        }
    }

    pub fn eval(&self, eta: f64) -> Result<f64> {
        if !(eta >= 0.0) {
            return Err(Error::Domain {
                kind: self.kind.name(),
                eta,
                boundary: 0.0,
            });
        }
        if eta >= self.upper {
            return Err(Error::Domain {
                kind: self.kind.name(),
                eta,
                boundary: self.upper,
            });
        }
        if eta == 0.0 {
            return Ok(0.0);
        }
        let p = &self.tuple.params;
        let s2 = self.s2();
        let v = match self.tuple.model {
            ModelId::GaussianMean | ModelId::LinearRegression => {
                let a = self.leverage();
                match self.kind {
                    CgfKind::ExcessNeg => -0.5 * (-(4.0 * eta * eta * s2 * s2 - 2.0 * eta * s2) * a).ln_1p(),
                    CgfKind::ExcessPos => -0.5 * (-(4.0 * eta * eta * s2 * s2 + 2.0 * eta * s2) * a).ln_1p(),
                    CgfKind::LossNeg => -0.5 * (2.0 * eta * s2 * (1.0 + a)).ln_1p(),
                    CgfKind::LossPos => -0.5 * (-2.0 * eta * s2 * (1.0 + a)).ln_1p(),
                }
            }
            ModelId::DiscreteMean | ModelId::ZeroMeanDiscrete => {
                let q = sign_rule_flip_probability(&self.tuple, self.n);
                let mu = p.mean;
                match self.kind {
                    // r(-1, z) = 4z and r(1, z) = 0.
                    CgfKind::ExcessNeg => {
                        (q * (8.0 * eta * eta * s2 - 4.0 * eta * mu).exp_m1()).ln_1p()
                    }
                    CgfKind::ExcessPos => {
                        (q * (8.0 * eta * eta * s2 + 4.0 * eta * mu).exp_m1()).ln_1p()
                    }
                    CgfKind::LossNeg | CgfKind::LossPos => {
                        // (w - Z)² is a scaled noncentral χ²₁ given W = w.
                        let t = if self.kind == CgfKind::LossPos { eta } else { -eta };
                        let d = 1.0 - 2.0 * t * s2;
                        let terms = [
                            (1.0 - q, t * (1.0 - mu).powi(2) / d),
                            (q, t * (-1.0 - mu).powi(2) / d),
                        ];
                        -0.5 * d.ln() + log_sum_exp_weighted(&terms)
                    }
                }
            }
            ModelId::HypothesisSelection => {
                let nf = self.n as f64;
                match self.kind {
                    CgfKind::ExcessNeg | CgfKind::ExcessPos => {
                        ((nf - 1.0) / nf * (s2 * eta * eta).exp_m1()).ln_1p()
                    }
                    // ℓ = -Z_W with Z_W ~ N(μ, σ²) under the product law.
                    CgfKind::LossNeg => eta * p.mean + 0.5 * eta * eta * s2,
                    CgfKind::LossPos => -eta * p.mean + 0.5 * eta * eta * s2,
                }
            }
            ModelId::LogisticRegression => unreachable!("rejected in constructor"),
        };
        Ok(v)
    }
}

/// `ln E e^{±η·(quantity)}` for sample 0.
pub fn cgf(tuple: &LearningTuple, n: usize, kind: CgfKind, eta: f64) -> Result<f64> {
    CgfEvaluator::new(tuple, n, kind)?.eval(eta)
}

#[cfg(test)]
mod tests {
    use super::*;

    const KINDS: [CgfKind; 4] = [CgfKind::ExcessNeg, CgfKind::ExcessPos, CgfKind::LossNeg, CgfKind::LossPos];

    fn suite() -> Vec<LearningTuple> {
        vec![
            LearningTuple::gaussian_mean(0.3, 1.5).unwrap(),
            LearningTuple::discrete_mean(1.0, 1.0).unwrap(),
            LearningTuple::zero_mean_discrete(1.0).unwrap(),
            LearningTuple::linear_regression(vec![1.0, 2.0, 0.5], 1.0, 0.8).unwrap(),
            LearningTuple::hypothesis_selection(0.2, 1.0).unwrap(),
        ]
    }

    #[test]
    fn reference_values() {
        let g = LearningTuple::gaussian_mean(0.0, 1.0).unwrap();
        assert!((cgf(&g, 100, CgfKind::ExcessNeg, 0.25).unwrap() + 0.001_248_440_099_29).abs() < 1e-14);
        let z = LearningTuple::zero_mean_discrete(1.0).unwrap();
        assert!((cgf(&z, 100, CgfKind::ExcessNeg, 0.5).unwrap() - 1.433_780_830_48).abs() < 1e-11);
        let s = LearningTuple::hypothesis_selection(0.0, 1.0).unwrap();
        assert!((cgf(&s, 10, CgfKind::ExcessNeg, 1.0).unwrap() - 0.934_701_664_001).abs() < 1e-11);
    }

    #[test]
    fn zero_at_origin_and_convex() {
        for t in suite() {
            for kind in KINDS {
                let ev = CgfEvaluator::new(&t, 20, kind).unwrap();
                assert_eq!(ev.eval(0.0).unwrap(), 0.0);
                let hi = ev.domain().1.min(3.0) * 0.99;
                let grid: Vec<f64> = (0..=60).map(|i| hi * i as f64 / 60.0).collect();
                for w in grid.windows(3) {
                    let mid = ev.eval(w[1]).unwrap();
                    let avg = 0.5 * (ev.eval(w[0]).unwrap() + ev.eval(w[2]).unwrap());
                    assert!(mid <= avg + 1e-9, "{} {:?} at {}", t.model, kind, w[1]);
                }
            }
        }
    }

    #[test]
    fn domain_violation_names_boundary() {
        let g = LearningTuple::gaussian_mean(0.0, 1.0).unwrap();
        let ev = CgfEvaluator::new(&g, 100, CgfKind::LossPos).unwrap();
        let b = ev.domain().1;
        assert!((b - 1.0 / (2.0 * 1.01)).abs() < 1e-15);
        match ev.eval(b) {
            Err(Error::Domain { boundary, .. }) => assert_eq!(boundary, b),
            other => panic!("{other:?}"),
        }
        assert!(ev.eval(-0.1).is_err());
    }

    #[test]
    fn logistic_unsupported() {
        let t = LearningTuple::with_defaults(ModelId::LogisticRegression);
        assert!(matches!(cgf(&t, 10, CgfKind::ExcessNeg, 0.1), Err(Error::Unsupported { .. })));
    }
}
