//! Mutual information: closed forms for the analytic models and
//! nonparametric estimators for the logistic experiment.
//!
//! All values are in nats. Estimators clip at zero and keep the unclipped
//! value in [`MiEstimate::raw_value`].

mod histogram;
mod knn;
mod neighbors;

pub use histogram::histogram_mi;
pub use knn::{chain_rule_mi, ksg_mi, mixed_mi, DEFAULT_K};

use crate::error::{invalid, Error, Result};
use crate::learning::{LearningTuple, ModelId};
use crate::models::{closed_form, MiKind};
use crate::rng::RngStream;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    ClosedForm,
    Ksg,
    MixedDc,
    Histogram,
    ChainRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MiFlag {
    /// Most points have no joint neighbours beyond the marginal ones; the
    /// true MI is infinite and the estimate grows with the sample count.
    DeterministicRelation,
    /// A constant axis; the estimate is reported as 0.
    DegenerateAxis,
    /// The histogram estimate is at its `ln(bins)` ceiling.
    Saturated,
    /// The value is `I(W; S_n)` rather than a per-sample `I(W; Z_i)`.
    DatasetLevel,
    /// Some label class had fewer than `k + 1` members.
    ReducedK,
    /// The closed form is an upper bound on the true MI.
    UpperBound,
    /// The closed form is evaluated by numerical quadrature.
    Quadrature,
}

/// Breakdown `I(W; X, Y) = I(W; Y) + Σ_y P(y) I(W; X | Y = y)` for binary `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainComponents {
    pub i_wy: f64,
    pub i_wx_given_y0: f64,
    pub i_wx_given_y1: f64,
    pub p_y0: f64,
    pub p_y1: f64,
}

impl ChainComponents {
    pub fn recombine(&self) -> f64 {
        self.i_wy + self.p_y0 * self.i_wx_given_y0 + self.p_y1 * self.i_wx_given_y1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiEstimate {
    pub value: f64,
    /// Value before clipping at zero.
    pub raw_value: f64,
    pub estimator: Estimator,
    pub k: Option<usize>,
    pub sample_count: usize,
    /// Seed of the data the estimate was computed from; `None` for closed forms.
    pub seed: Option<u64>,
    pub components: Option<ChainComponents>,
    pub flags: Vec<MiFlag>,
    pub warnings: Vec<String>,
    /// Miller–Madow first-order bias of the plug-in histogram estimate.
    pub bias_correction: Option<f64>,
}

impl MiEstimate {
    fn new(raw: f64, estimator: Estimator, k: Option<usize>, sample_count: usize) -> Self {
        MiEstimate {
            value: raw.max(0.0),
            raw_value: raw,
            estimator,
            k,
            sample_count,
            seed: None,
            components: None,
            flags: Vec::new(),
            warnings: Vec::new(),
            bias_correction: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn has_flag(&self, flag: MiFlag) -> bool {
        self.flags.contains(&flag)
    }

    fn flag(&mut self, flag: MiFlag) {
        if !self.flags.contains(&flag) {
            self.flags.push(flag);
        }
    }
}

/// A borrowed row-major point cloud.
#[derive(Debug, Clone, Copy)]
pub struct Points<'a> {
    data: &'a [f64],
    dim: usize,
}

impl<'a> Points<'a> {
    pub fn new(data: &'a [f64], dim: usize) -> Result<Self> {
        if dim == 0 || data.len() % dim != 0 {
            return invalid(format!("{} values do not form points of dimension {dim}", data.len()));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return invalid("sample coordinates must be finite");
        }
        Ok(Points { data, dim })
    }

    pub fn scalar(data: &'a [f64]) -> Result<Self> {
        Self::new(data, 1)
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &'a [f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    fn is_constant(&self) -> bool {
        let first = self.point(0);
        (1..self.len()).all(|i| self.point(i) == first)
    }

    /// Copy of the rows in `idx`.
    fn gather(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter().flat_map(|&i| self.point(i).iter().copied()).collect()
    }
}

/// Exact `I(W; Z_i)` for every sample, or the single dataset-level `I(W; S_n)`
/// for hypothesis selection.
pub fn closed_form_mi(tuple: &LearningTuple, n: usize) -> Result<Vec<MiEstimate>> {
    if tuple.model == ModelId::LogisticRegression {
        return Err(Error::Unsupported {
            what: "closed-form MI",
            model: "logistic_regression",
            hint: "use the ksg, mixed or chain_rule estimators on Monte-Carlo draws",
        });
    }
    let report = closed_form(tuple, n)?;
    let extra = match report.mi_kind {
        MiKind::UpperBound => Some(MiFlag::UpperBound),
        MiKind::Quadrature => Some(MiFlag::Quadrature),
        _ => None,
    };
    let make = |v: f64| {
        let mut e = MiEstimate::new(v, Estimator::ClosedForm, None, n);
        if let Some(f) = extra {
            e.flag(f);
        }
        e
    };
    if report.mi_kind == MiKind::DatasetLevel {
        let total = report
            .mi_total
            .ok_or_else(|| Error::Runtime("dataset-level MI missing".into()))?;
        let mut e = make(total);
        e.flag(MiFlag::DatasetLevel);
        return Ok(vec![e]);
    }
    Ok(report.mi_per_sample.iter().map(|&v| make(v)).collect())
}

/// Correlated standard-normal pairs; prefixes of one stream are nested samples.
pub fn correlated_gaussian(n: usize, rho: f64, stream: RngStream) -> (Vec<f64>, Vec<f64>) {
    let mut rng = stream.rng();
    let s = (1.0 - rho * rho).sqrt();
    (0..n)
        .map(|_| {
            let a: f64 = StandardNormal.sample(&mut rng);
            let b: f64 = StandardNormal.sample(&mut rng);
            (a, rho * a + s * b)
        })
        .unzip()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        let g = LearningTuple::gaussian_mean(0.0, 1.0).unwrap();
        let e = closed_form_mi(&g, 100).unwrap();
        assert_eq!(e.len(), 100);
        assert!(e.iter().all(|m| (m.value - 0.005_025_167_926_75).abs() < 1e-13 && m.seed.is_none()));
        let lr = LearningTuple::linear_regression(vec![1.0], 0.0, 1.0).unwrap();
        let e = closed_form_mi(&lr, 10).unwrap();
        assert!(e.iter().all(|m| (m.value - 0.052_680_257_828_9).abs() < 1e-12));
        let s = LearningTuple::hypothesis_selection(0.0, 1.0).unwrap();
        let e = closed_form_mi(&s, 10).unwrap();
        assert_eq!(e.len(), 1);
        assert!((e[0].value - 10f64.ln()).abs() < 1e-15);
        assert!(e[0].has_flag(MiFlag::DatasetLevel));
        let d = LearningTuple::discrete_mean(1.0, 1.0).unwrap();
        assert!(closed_form_mi(&d, 4).unwrap()[0].has_flag(MiFlag::UpperBound));
        let l = LearningTuple::with_defaults(ModelId::LogisticRegression);
        assert!(matches!(closed_form_mi(&l, 10), Err(Error::Unsupported { .. })));
    }

    #[test]
    fn points_validation() {
        assert!(Points::new(&[1.0, 2.0, 3.0], 2).is_err());
        assert!(Points::scalar(&[f64::NAN]).is_err());
        let p = Points::new(&[1.0, 2.0, 3.0, 4.0], 2).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.point(1), &[3.0, 4.0]);
    }
}
