//! Generalization and excess-risk bounds evaluated from explicit inputs.
//!
//! Every function takes the per-sample mutual informations `I(W; Z_i)` as a
//! list (length `n`) and never estimates them. A [`BoundReport`] carries the
//! value together with everything that produced it. Out-of-range parameters
//! that make a bound inapplicable give `valid = false` with a reason;
//! malformed inputs are rejected with an error.

use crate::error::{invalid, Error, Result};
use crate::learning::{LearningTuple, ModelId};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `(1/n) Σ √(2σ² I_i)`.
    MiSqrt,
    /// Sub-Gaussian fast-rate bound with `a_η`.
    SubGaussianFast,
    /// (η,c)-central bound on the excess loss.
    EtaC,
    /// (η,c)-central bound stated on the loss itself.
    EtaCLoss,
    SubExponentialLoss,
    SubGammaLoss,
    /// (v,c)-central intermediate-rate bound.
    Intermediate,
    /// Regularised ERM excess-risk bound.
    Rerm,
    GaussianLowerGen,
    GaussianLowerExcess,
}

/// Parameters a bound may depend on. Unused fields stay `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundParams {
    pub eta: Option<f64>,
    pub c: Option<f64>,
    pub sigma: Option<f64>,
    pub nu2: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub a_eta: Option<f64>,
    pub epsilon: Option<f64>,
    pub reg_coeff: Option<f64>,
    pub reg_bound: Option<f64>,
}

impl BoundParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("eta", self.eta),
            ("c", self.c),
            ("sigma", self.sigma),
            ("nu2", self.nu2),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("a_eta", self.a_eta),
            ("epsilon", self.epsilon),
            ("reg_coeff", self.reg_coeff),
            ("reg_bound", self.reg_bound),
        ];
        for (name, v) in fields {
            if let Some(v) = v {
                if !v.is_finite() {
                    return invalid(format!("{name} must be finite, got {v}"));
                }
            }
        }
        let check = |name: &str, v: Option<f64>, ok: fn(f64) -> bool, range: &str| -> Result<()> {
            match v {
                Some(x) if !ok(x) => invalid(format!("{name} must lie in {range}, got {x}")),
                _ => Ok(()),
            }
        };
        check("eta", self.eta, |x| x > 0.0, "(0, ∞)")?;
        check("c", self.c, |x| x > 0.0 && x <= 1.0, "(0, 1]")?;
        check("sigma", self.sigma, |x| x >= 0.0, "[0, ∞)")?;
        check("nu2", self.nu2, |x| x >= 0.0, "[0, ∞)")?;
        check("alpha", self.alpha, |x| x >= 0.0, "[0, ∞)")?;
        check("beta", self.beta, |x| (0.0..=1.0).contains(&x), "[0, 1]")?;
        check("a_eta", self.a_eta, |x| x > 0.0 && x < 1.0, "(0, 1)")?;
        check("epsilon", self.epsilon, |x| x >= 0.0, "[0, ∞)")?;
        check("reg_coeff", self.reg_coeff, |x| x >= 0.0, "[0, ∞)")?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub mi: Vec<f64>,
    /// Expected empirical excess risk, or empirical loss for loss-side bounds.
    pub empirical: Option<f64>,
    pub params: BoundParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    /// Bound on the expected generalization error (or the quantity named by `kind`).
    pub value: f64,
    /// Companion bound on the expected excess risk, where one exists.
    pub excess_value: Option<f64>,
    pub valid: bool,
    pub reason: Option<String>,
    pub notes: Vec<String>,
    pub inputs: BoundInputs,
}

impl BoundReport {
    fn new(kind: BoundKind, value: f64, inputs: BoundInputs) -> Self {
        let mut r = BoundReport {
            kind,
            value,
            excess_value: None,
            valid: true,
            reason: None,
            notes: Vec::new(),
            inputs,
        };
        if let Some(e) = r.inputs.empirical {
            if e > 0.0 && kind != BoundKind::EtaCLoss {
                r.notes.push(
                    "empirical excess is positive (non-ERM algorithm); the empirical term now loosens the bound"
                        .into(),
                );
            }
        }
        r
    }

    fn invalid(kind: BoundKind, reason: String, inputs: BoundInputs) -> Self {
        BoundReport {
            kind,
            value: f64::NAN,
            excess_value: None,
            valid: false,
            reason: Some(reason),
            notes: Vec::new(),
            inputs,
        }
    }
}

fn check_mi(mi: &[f64]) -> Result<()> {
    if mi.is_empty() {
        return invalid("mutual-information list is empty");
    }
    if let Some(bad) = mi.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return invalid(format!("mutual-information entries must be finite and >= 0, got {bad}"));
    }
    Ok(())
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return invalid(format!("{name} must be finite, got {v}"));
    }
    Ok(())
}

fn mean(mi: &[f64]) -> f64 {
    mi.iter().sum::<f64>() / mi.len() as f64
}

/// A CGF-bounding function `ψ` on `(0, b)`.
pub trait Psi {
    fn value(&self, lambda: f64) -> f64;
    /// Right end `b` of the domain (may be infinite).
    fn upper(&self) -> f64;
}

/// `ψ(λ) = σ²λ²/2` on `(0, ∞)`.
#[derive(Debug, Clone, Copy)]
pub struct SubGaussianPsi {
    pub sigma2: f64,
}

impl Psi for SubGaussianPsi {
    fn value(&self, l: f64) -> f64 {
        0.5 * self.sigma2 * l * l
    }
    fn upper(&self) -> f64 {
        f64::INFINITY
    }
}

/// `ψ(λ) = ν²λ²/(2(1 − αλ))` on `(0, 1/α)`.
#[derive(Debug, Clone, Copy)]
pub struct SubGammaPsi {
    pub nu2: f64,
    pub alpha: f64,
}

impl Psi for SubGammaPsi {
    fn value(&self, l: f64) -> f64 {
        self.nu2 * l * l / (2.0 * (1.0 - self.alpha * l))
    }
    fn upper(&self) -> f64 {
        if self.alpha > 0.0 {
            1.0 / self.alpha
        } else {
            f64::INFINITY
        }
    }
}

/// `ψ(λ) = ν²λ²/2` restricted to `(0, 1/α)`.
#[derive(Debug, Clone, Copy)]
pub struct SubExponentialPsi {
    pub nu2: f64,
    pub alpha: f64,
}

impl Psi for SubExponentialPsi {
    fn value(&self, l: f64) -> f64 {
        0.5 * self.nu2 * l * l
    }
    fn upper(&self) -> f64 {
        if self.alpha > 0.0 {
            1.0 / self.alpha
        } else {
            f64::INFINITY
        }
    }
}

/// Any closure with an explicit domain end.
pub struct FnPsi<F: Fn(f64) -> f64> {
    pub f: F,
    pub upper: f64,
}

impl<F: Fn(f64) -> f64> Psi for FnPsi<F> {
    fn value(&self, l: f64) -> f64 {
        (self.f)(l)
    }
    fn upper(&self) -> f64 {
        self.upper
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiInverse {
    /// `inf_λ (x + ψ(λ))/λ`.
    pub value: f64,
    pub argmin: f64,
    pub valid: bool,
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Generalized inverse `ψ*⁻¹(x) = inf_{λ ∈ (0,b)} (x + ψ(λ))/λ` by golden-section search.
pub fn psi_inverse(psi: &dyn Psi, x: f64) -> Result<PsiInverse> {
    if !(x >= 0.0) || !x.is_finite() {
        return invalid(format!("psi_inverse needs finite x >= 0, got {x}"));
    }
    let b = psi.upper();
    if !(b > 0.0) {
        return invalid(format!("psi_inverse domain (0, {b}) is empty"));
    }
    let f = |l: f64| (x + psi.value(l)) / l;
    let mut hi = if b.is_finite() { b * (1.0 - 1e-12) } else { 1.0 };
    if !b.is_finite() {
        // Expand until the objective turns upward; the minimiser then lies below `hi`.
        let mut doublings = 0;
        while f(2.0 * hi) <= f(hi) {
            hi *= 2.0;
            doublings += 1;
            if doublings > 1000 || !hi.is_finite() {
                return Ok(PsiInverse {
                    value: f64::NAN,
                    argmin: f64::INFINITY,
                    valid: false,
                });
            }
        }
        hi *= 2.0;
    }
    let (mut a, mut c) = (0.0, hi);
    let mut l1 = c - GOLDEN * (c - a);
    let mut l2 = a + GOLDEN * (c - a);
    let (mut f1, mut f2) = (f(l1), f(l2));
    for _ in 0..200 {
        if (c - a) <= 1e-10 * 0.5 * (l1 + l2) {
            break;
        }
        if f1 <= f2 {
            c = l2;
            l2 = l1;
            f2 = f1;
            l1 = c - GOLDEN * (c - a);
            f1 = f(l1);
        } else {
            a = l1;
            l1 = l2;
            f1 = f2;
            l2 = a + GOLDEN * (c - a);
            f2 = f(l2);
        }
    }
    let (argmin, value) = if f1 <= f2 { (l1, f1) } else { (l2, f2) };
    let value = if x == 0.0 { value.max(0.0) } else { value };
    Ok(PsiInverse {
        value,
        argmin,
        valid: value.is_finite(),
    })
}

/// `(1/n) Σ √(2σ² I_i)`.
pub fn mi_sqrt_bound(sigma: f64, mi: &[f64]) -> Result<BoundReport> {
    check_mi(mi)?;
    let params = BoundParams {
        sigma: Some(sigma),
        ..Default::default()
    };
    params.validate()?;
    let value = mi.iter().map(|i| (2.0 * sigma * sigma * i).sqrt()).sum::<f64>() / mi.len() as f64;
    let inputs = BoundInputs {
        mi: mi.to_vec(),
        empirical: None,
        params,
    };
    Ok(BoundReport::new(BoundKind::MiSqrt, value, inputs))
}

/// Sub-Gaussian fast-rate bound with `a_η = 1 − ησ²/(2 E[r])`, valid for `0 < η < 2E[r]/σ²`.
pub fn fast_subgaussian_bound(
    sigma: f64,
    eta: f64,
    mean_excess: f64,
    mi: &[f64],
    empirical_excess: f64,
) -> Result<BoundReport> {
    check_mi(mi)?;
    check_finite("empirical_excess", empirical_excess)?;
    check_finite("mean_excess", mean_excess)?;
    if mean_excess <= 0.0 {
        return invalid(format!("mean_excess must be > 0, got {mean_excess}"));
    }
    let limit = 2.0 * mean_excess / (sigma * sigma);
    let a = 1.0 - eta * sigma * sigma / (2.0 * mean_excess);
    let mut params = BoundParams {
        eta: None,
        sigma: Some(sigma),
        ..Default::default()
    };
    params.validate()?;
    params.eta = Some(eta);
    let inputs = |params: BoundParams| BoundInputs {
        mi: mi.to_vec(),
        empirical: Some(empirical_excess),
        params,
    };
    if !(eta > 0.0 && eta < limit) || !(a > 0.0) {
        return Ok(BoundReport::invalid(
            BoundKind::SubGaussianFast,
            format!("eta must lie in (0, 2E[r]/σ²) = (0, {limit})"),
            inputs(params),
        ));
    }
    params.a_eta = Some(a);
    let mi_term = mean(mi) / (eta * a);
    let mut r = BoundReport::new(
        BoundKind::SubGaussianFast,
        (1.0 - a) / a * empirical_excess + mi_term,
        inputs(params),
    );
    r.excess_value = Some(empirical_excess / a + mi_term);
    Ok(r)
}

fn eta_c_params(eta: f64, c: f64) -> Result<BoundParams> {
    if !(c > 0.0 && c <= 1.0) {
        return invalid(format!("c must lie in (0, 1], got {c}"));
    }
    let p = BoundParams {
        eta: Some(eta),
        c: Some(c),
        ..Default::default()
    };
    p.validate()?;
    Ok(p)
}

/// (η,c)-central bound: `((1−c)/c)·E[R̂] + ΣI/(cηn)`; excess variant `E[R̂]/c + ΣI/(cηn)`.
pub fn eta_c_bound(eta: f64, c: f64, empirical_excess: f64, mi: &[f64]) -> Result<BoundReport> {
    check_mi(mi)?;
    check_finite("empirical_excess", empirical_excess)?;
    let params = eta_c_params(eta, c)?;
    let mi_term = mean(mi) / (c * eta);
    let inputs = BoundInputs {
        mi: mi.to_vec(),
        empirical: Some(empirical_excess),
        params,
    };
    let mut r = BoundReport::new(BoundKind::EtaC, (1.0 - c) / c * empirical_excess + mi_term, inputs);
    r.excess_value = Some(empirical_excess / c + mi_term);
    Ok(r)
}

/// Loss-side (η,c)-central bound: `((1−c)/c)·E[L̂] + ΣI/(cηn)`.
pub fn eta_c_loss_bound(eta: f64, c: f64, empirical_loss: f64, mi: &[f64]) -> Result<BoundReport> {
    check_mi(mi)?;
    check_finite("empirical_loss", empirical_loss)?;
    let params = eta_c_params(eta, c)?;
    let inputs = BoundInputs {
        mi: mi.to_vec(),
        empirical: Some(empirical_loss),
        params,
    };
    let mut r = BoundReport::new(
        BoundKind::EtaCLoss,
        (1.0 - c) / c * empirical_loss + mean(mi) / (c * eta),
        inputs,
    );
    if c < 1.0 && empirical_loss > 0.0 {
        r.notes
            .push("the empirical-loss term does not vanish with n; the bound is not tight".into());
    }
    Ok(r)
}

/// The loss-side central constant `c = ln(1 + 4ησ²)/(4ησ²)` for the Gaussian mean.
pub fn gaussian_loss_central_c(eta: f64, sigma_n: f64) -> f64 {
    let x = 4.0 * eta * sigma_n * sigma_n;
    x.ln_1p() / x
}

/// Sub-exponential loss bound, split per sample at `I_i = ν²/(2α²)`.
pub fn subexp_loss_bound(nu2: f64, alpha: f64, mi: &[f64]) -> Result<BoundReport> {
    check_mi(mi)?;
    let params = BoundParams {
        nu2: Some(nu2),
        alpha: Some(alpha),
        ..Default::default()
    };
    params.validate()?;
    let threshold = if alpha > 0.0 {
        nu2 / (2.0 * alpha * alpha)
    } else {
        f64::INFINITY
    };
    let total: f64 = mi
        .iter()
        .map(|&i| {
            if i <= threshold {
                (2.0 * nu2 * i).sqrt()
            } else {
                nu2 / (2.0 * alpha) + alpha * i
            }
        })
        .sum();
    let inputs = BoundInputs {
        mi: mi.to_vec(),
        empirical: None,
        params,
    };
    let mut r = BoundReport::new(BoundKind::SubExponentialLoss, total / mi.len() as f64, inputs);
    let above = mi.iter().filter(|&&i| i > threshold).count();
    if above > 0 && above < mi.len() {
        r.notes.push(format!("{above} of {} terms use the linear branch", mi.len()));
    }
    Ok(r)
}

/// Sub-Gamma loss bound `(1/n) Σ [√(2ν² I_i) + α I_i]`.
pub fn subgamma_loss_bound(nu2: f64, alpha: f64, mi: &[f64]) -> Result<BoundReport> {
    check_mi(mi)?;
    let params = BoundParams {
        nu2: Some(nu2),
        alpha: Some(alpha),
        ..Default::default()
    };
    params.validate()?;
    let total: f64 = mi.iter().map(|&i| (2.0 * nu2 * i).sqrt() + alpha * i).sum();
    let inputs = BoundInputs {
        mi: mi.to_vec(),
        empirical: None,
        params,
    };
    Ok(BoundReport::new(BoundKind::SubGammaLoss, total / mi.len() as f64, inputs))
}

/// How the slack `ε` of the (v,c)-central condition enters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum EpsilonMode {
    /// Fixed `ε` with `η = v(ε)`: `((1−c)/c)E[R̂] + (1/n)Σ(I_i/(ηc) + ε/c)`.
    Explicit { epsilon: f64 },
    /// Per-sample optimised `ε`: `((1−c)/c)E[R̂] + (2/(nc)) Σ I_i^{1/(2−β)}`.
    Optimized,
    /// Alternative coefficient `(1−β)^{1/(2−β)}(2−β)/(c(1−β))` on `(1/n) Σ I_i^{1/(2−β)}`.
    MainText,
}

/// Intermediate-rate bound under the (v,c)-central condition with `v(ε) = ε^{1−β}`.
pub fn intermediate_bound(
    eta: f64,
    c: f64,
    beta: f64,
    empirical_excess: f64,
    mi: &[f64],
    mode: EpsilonMode,
) -> Result<BoundReport> {
    check_mi(mi)?;
    check_finite("empirical_excess", empirical_excess)?;
    if !(0.0..=1.0).contains(&beta) {
        return invalid(format!("beta must lie in [0, 1], got {beta}"));
    }
    let mut params = eta_c_params(eta, c)?;
    params.beta = Some(beta);
    let emp_term = (1.0 - c) / c * empirical_excess;
    let p = 1.0 / (2.0 - beta);
    let mi_pow = mi.iter().map(|i| i.powf(p)).sum::<f64>() / mi.len() as f64;
    let value = match mode {
        EpsilonMode::Explicit { epsilon } => {
            if !(epsilon >= 0.0) || !epsilon.is_finite() {
                return invalid(format!("epsilon must be finite and >= 0, got {epsilon}"));
            }
            params.epsilon = Some(epsilon);
            emp_term + mean(mi) / (eta * c) + epsilon / c
        }
        EpsilonMode::Optimized => emp_term + 2.0 / c * mi_pow,
        EpsilonMode::MainText => {
            // (1−β)^{1/(2−β) − 1} → 1 as β → 1.
            let lead = if beta == 1.0 {
                1.0
            } else {
                (1.0 - beta).powf(p - 1.0)
            };
            emp_term + lead * (2.0 - beta) / c * mi_pow
        }
    };
    let inputs = BoundInputs {
        mi: mi.to_vec(),
        empirical: Some(empirical_excess),
        params,
    };
    Ok(BoundReport::new(BoundKind::Intermediate, value, inputs))
}

/// Which form of the regularised-ERM bound to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RermForm {
    /// Includes `(1/c) E[R̂_reg]` with the given expected regularised empirical excess.
    Full(f64),
    /// Drops the (non-positive for the RERM) regularised empirical term.
    Simplified,
}

/// Excess-risk bound for regularised ERM:
/// `(1/c) E[R̂_reg] + λB/(cn) + ΣI/(cηn)`.
pub fn rerm_bound(
    eta: f64,
    c: f64,
    reg_coeff: f64,
    reg_bound: f64,
    form: RermForm,
    mi: &[f64],
) -> Result<BoundReport> {
    check_mi(mi)?;
    let mut params = eta_c_params(eta, c)?;
    params.reg_coeff = Some(reg_coeff);
    params.reg_bound = Some(reg_bound);
    params.validate()?;
    let n = mi.len() as f64;
    let base = reg_coeff * reg_bound / (c * n) + mean(mi) / (c * eta);
    let (value, empirical) = match form {
        RermForm::Full(emp) => {
            check_finite("empirical_reg_excess", emp)?;
            (emp / c + base, Some(emp))
        }
        RermForm::Simplified => (base, None),
    };
    let inputs = BoundInputs {
        mi: mi.to_vec(),
        empirical,
        params,
    };
    let mut r = BoundReport::new(BoundKind::Rerm, value, inputs);
    r.excess_value = Some(value);
    Ok(r)
}

/// Matching lower bounds for the Gaussian mean:
/// `gen ≥ 2σ²(n−1)/n² ΣI` and `E[r] ≥ (2σ²/n)ΣI + E[R̂] − gen/(n−1)`.
pub fn gaussian_lower_bounds(
    tuple: &LearningTuple,
    mi: &[f64],
    empirical_excess: f64,
    gen_error: f64,
) -> Result<(BoundReport, BoundReport)> {
    if tuple.model != ModelId::GaussianMean {
        return Err(Error::Unsupported {
            what: "the matching lower bounds",
            model: tuple.model.name(),
            hint: "they are specific to gaussian_mean",
        });
    }
    check_mi(mi)?;
    check_finite("empirical_excess", empirical_excess)?;
    check_finite("gen_error", gen_error)?;
    let n = mi.len() as f64;
    if n < 2.0 {
        return invalid("lower bounds need n >= 2");
    }
    let s2 = tuple.params.noise_sd.powi(2);
    let sum: f64 = mi.iter().sum();
    let params = BoundParams {
        sigma: Some(tuple.params.noise_sd),
        ..Default::default()
    };
    let inputs = BoundInputs {
        mi: mi.to_vec(),
        empirical: Some(empirical_excess),
        params,
    };
    let gen = BoundReport::new(
        BoundKind::GaussianLowerGen,
        2.0 * s2 * (n - 1.0) / (n * n) * sum,
        inputs.clone(),
    );
    let excess = BoundReport::new(
        BoundKind::GaussianLowerExcess,
        2.0 * s2 / n * sum + empirical_excess - gen_error / (n - 1.0),
        inputs,
    );
    Ok((gen, excess))
}

#[cfg(test)]
mod tests {
    use super::*;

    const I100: f64 = 0.005_025_167_926_750_7;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn psi_inverse_analytic_cases() {
        let g = SubGaussianPsi { sigma2: 1.0 };
        assert!(close(psi_inverse(&g, 0.5).unwrap().value, 1.0, 1e-12));
        assert!(psi_inverse(&g, 0.0).unwrap().value.abs() < 1e-9);
        let sg = SubGammaPsi { nu2: 1.0, alpha: 0.5 };
        assert!(close(psi_inverse(&sg, 2.0).unwrap().value, 3.0, 1e-9));
        assert!(psi_inverse(&g, -1.0).is_err());
        let empty = FnPsi { f: |l: f64| l, upper: 0.0 };
        assert!(psi_inverse(&empty, 1.0).is_err());
        // ψ decreasing without bound: objective never turns upward.
        let bad = FnPsi { f: |l: f64| -l * l, upper: f64::INFINITY };
        assert!(!psi_inverse(&bad, 1.0).unwrap().valid);
    }

    #[test]
    fn mi_sqrt_values() {
        let r = mi_sqrt_bound(1.0, &[0.005; 100]).unwrap();
        assert!(close(r.value, 0.1, 1e-15));
        assert_eq!(mi_sqrt_bound(1.0, &[0.0; 5]).unwrap().value, 0.0);
        assert!(mi_sqrt_bound(1.0, &[]).is_err());
        // Loss side for the Gaussian mean at n = 100: σ = √2 σ_W².
        let sigma = 2f64.sqrt() * 1.01;
        let v = mi_sqrt_bound(sigma, &[I100; 100]).unwrap().value;
        assert!(close(v, 0.143_194_606_073, 1e-11));
        assert!(v <= 0.145_005_201_023);
    }

    #[test]
    fn fast_subgaussian_values() {
        // σ² = 4σ_N⁴/n gives a_η = 1/2 at η = 1/4.
        let sigma = 0.2;
        let r = fast_subgaussian_bound(sigma, 0.25, 0.01, &[I100; 100], -0.01).unwrap();
        assert!(r.valid);
        assert!(close(r.inputs.params.a_eta.unwrap(), 0.5, 1e-15));
        assert!(close(r.value, -0.01 + 8.0 * I100, 1e-15));
        assert!(close(r.value, 0.030_201_343_414, 1e-11));
        let zero = fast_subgaussian_bound(sigma, 0.25, 0.01, &[0.0; 3], 0.0).unwrap();
        assert_eq!(zero.value, 0.0);
        let edge = fast_subgaussian_bound(sigma, 0.5, 0.01, &[I100; 3], -0.01).unwrap();
        assert!(!edge.valid && edge.reason.unwrap().starts_with("eta must lie in (0, 2E[r]/σ²)"));
    }

    #[test]
    fn eta_c_values() {
        let r = eta_c_bound(0.125, 0.5, -0.01, &[I100; 100]).unwrap();
        assert!(close(r.value, -0.01 + 16.0 * I100, 1e-15));
        assert!(close(r.value, 0.070_402_686_828, 1e-11));
        let c1 = eta_c_bound(0.5, 1.0, -3.0, &[0.1, 0.3]).unwrap();
        assert_eq!(c1.value, 0.2 / 0.5);
        assert_eq!(eta_c_bound(0.5, 0.5, 0.0, &[0.0]).unwrap().value, 0.0);
        assert!(eta_c_bound(0.5, 0.0, 0.0, &[0.0]).is_err());
        assert!(eta_c_bound(0.5, 1.5, 0.0, &[0.0]).is_err());
    }

    #[test]
    fn eta_c_loss_values() {
        let c = gaussian_loss_central_c(0.25, 1.0);
        assert!(close(c, std::f64::consts::LN_2, 1e-15));
        // Printed form uses ΣI/n ≤ 1/(2(n−1)).
        let printed = (1.0 - c) / c * 0.99 + 1.0 / (2.0 * c * 0.25 * 99.0);
        assert!(close(printed, 0.467_413_444_841, 1e-11));
        let exact = eta_c_loss_bound(0.25, c, 0.99, &[I100; 100]).unwrap().value;
        assert!(exact <= printed && exact > 0.0);
    }

    #[test]
    fn subexp_and_subgamma_values() {
        assert!(close(subexp_loss_bound(1.0, 1.0, &[0.02; 10]).unwrap().value, 0.2, 1e-15));
        assert!(close(subexp_loss_bound(1.0, 1.0, &[1.0; 10]).unwrap().value, 1.5, 1e-15));
        assert_eq!(subexp_loss_bound(1.0, 1.0, &[0.0; 4]).unwrap().value, 0.0);
        let mixed = subexp_loss_bound(1.0, 1.0, &[0.02, 1.0]).unwrap();
        assert!(close(mixed.value, (0.2 + 1.5) / 2.0, 1e-15));
        assert!(close(subgamma_loss_bound(1.0, 0.5, &[2.0]).unwrap().value, 3.0, 1e-15));
        let mi = [0.1, 0.02, 0.3];
        assert!(close(
            subgamma_loss_bound(2.0, 0.0, &mi).unwrap().value,
            mi_sqrt_bound(2f64.sqrt(), &mi).unwrap().value,
            1e-15
        ));
        assert_eq!(subgamma_loss_bound(1.0, 1.0, &[0.0]).unwrap().value, 0.0);
    }

    #[test]
    fn intermediate_values() {
        let opt = |beta| intermediate_bound(1.0, 0.5, beta, 0.0, &[0.01; 10], EpsilonMode::Optimized);
        assert!(close(opt(1.0).unwrap().value, 0.04, 1e-15));
        assert!(close(opt(0.0).unwrap().value, 0.4, 1e-15));
        assert!(opt(1.5).is_err());
        let explicit =
            intermediate_bound(0.3, 0.5, 0.5, -0.02, &[0.01; 10], EpsilonMode::Explicit { epsilon: 0.0 }).unwrap();
        let ec = eta_c_bound(0.3, 0.5, -0.02, &[0.01; 10]).unwrap();
        assert!(close(explicit.value, ec.value, 1e-15));
        let main = intermediate_bound(1.0, 0.5, 1.0, 0.0, &[0.01; 10], EpsilonMode::MainText).unwrap();
        assert!(close(main.value, 0.02, 1e-15));
    }

    #[test]
    fn rerm_values() {
        let r = rerm_bound(0.25, 0.5, 1.0, 2.0, RermForm::Simplified, &[I100; 100]).unwrap();
        assert!(close(r.value, 0.04 + I100 / 0.125, 1e-15));
        assert!(close(r.value, 0.080_201_343_414, 1e-11));
        let full = rerm_bound(0.25, 0.5, 0.0, 2.0, RermForm::Full(-0.01), &[I100; 100]).unwrap();
        let ec = eta_c_bound(0.25, 0.5, -0.01, &[I100; 100]).unwrap();
        assert!(close(full.value, ec.excess_value.unwrap(), 1e-15));
    }

    #[test]
    fn lower_bound_values() {
        let g = LearningTuple::gaussian_mean(0.0, 1.0).unwrap();
        let (lg, _) = gaussian_lower_bounds(&g, &[I100; 100], -0.01, 0.02).unwrap();
        assert!(close(lg.value, 0.009_949_832_495, 1e-11));
        assert!(lg.value <= 0.02);
        let (z, _) = gaussian_lower_bounds(&g, &[0.0; 10], 0.0, 0.0).unwrap();
        assert_eq!(z.value, 0.0);
        let other = LearningTuple::zero_mean_discrete(1.0).unwrap();
        assert!(matches!(
            gaussian_lower_bounds(&other, &[0.1; 3], 0.0, 0.0),
            Err(Error::Unsupported { .. })
        ));
    }
}
