//! Scalar special functions used by the closed forms and estimators.

use crate::error::{invalid, Result};
use std::f64::consts::{LN_2, PI, SQRT_2};

/// Standard normal upper tail `Q(x) = P(N(0,1) > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// Standard normal CDF, `Φ(x) = Q(-x)`.
pub fn normal_cdf(x: f64) -> f64 {
    q_function(-x)
}

pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Binary entropy in nats; `h2(0) = h2(1) = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("binary_entropy needs p in [0, 1], got {p}"));
    }
    Ok(h2(p))
}

/// Unchecked binary entropy for internal callers that already hold a probability.
pub(crate) fn h2(p: f64) -> f64 {
    let term = |q: f64| if q <= 0.0 { 0.0 } else { -q * q.ln() };
    term(p) + term(1.0 - p)
}

/// Nats to bits.
pub fn nats_to_bits(v: f64) -> f64 {
    v / LN_2
}

/// Digamma for positive arguments (recurrence to x ≥ 10, then the asymptotic series).
pub fn digamma(mut x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let f = 1.0 / (x * x);
    let series = f
        * (1.0 / 12.0
            - f * (1.0 / 120.0 - f * (1.0 / 252.0 - f * (1.0 / 240.0 - f * (1.0 / 132.0)))));
    acc + x.ln() - 0.5 / x - series
}

/// `ln(1 + e^x)` without overflow.
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln Σ w_i e^{a_i}` for non-negative weights.
pub fn log_sum_exp_weighted(terms: &[(f64, f64)]) -> f64 {
    let m = terms
        .iter()
        .filter(|(w, _)| *w > 0.0)
        .map(|(_, a)| *a)
        .fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = terms.iter().map(|(w, a)| w * (a - m).exp()).sum();
    m + s.ln()
}

/// `E[f(U)]` for standard normal `U`, composite Simpson on [-12, 12].
///
/// Integrands used here are smooth and bounded by polynomial growth, so the
/// truncated tail mass (< 1e-32) and the Simpson error are both negligible.
pub fn gaussian_expectation(f: impl Fn(f64) -> f64) -> f64 {
    simpson(|u| f(u) * normal_pdf(u), -12.0, 12.0, 24_000)
}

/// Composite Simpson rule with `panels` (rounded up to even) subintervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let m = panels + panels % 2;
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    // High-precision reference values of Q(x).
    const Q_TABLE: &[(f64, f64)] = &[
        (0.5, 0.308_537_538_725_986_9),
        (1.0, 0.158_655_253_931_457_05),
        (2.0, 0.022_750_131_948_179_207),
        (3.0, 0.001_349_898_031_630_094_5),
        (5.0, 2.866_515_718_791_939e-7),
        (8.0, 6.220_960_574_271_784e-16),
        (-1.0, 0.841_344_746_068_542_9),
        (-3.0, 0.998_650_101_968_369_9),
    ];

    #[test]
    fn q_function_matches_reference() {
        for &(x, q) in Q_TABLE {
            let rel = (q_function(x) - q).abs() / q;
            assert!(rel < 1e-12, "Q({x}) rel err {rel}");
        }
        assert_eq!(q_function(0.0), 0.5);
    }

    #[test]
    fn q_symmetry() {
        for x in [0.5, 1.0, 3.0] {
            assert!((q_function(-x) - (1.0 - q_function(x))).abs() < 1e-15);
        }
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - LN_2).abs() < 1e-15);
        assert!((binary_entropy(0.02275).unwrap() - 0.108_556_809_232_604).abs() < 1e-12);
        assert!(binary_entropy(1.1).is_err());
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn digamma_matches_harmonic_numbers() {
        let gamma = 0.577_215_664_901_532_9;
        let mut h = 0.0;
        for n in 1..200 {
            let expected = h - gamma;
            assert!((digamma(n as f64) - expected).abs() < 1e-13, "psi({n})");
            h += 1.0 / n as f64;
        }
        assert!((digamma(0.5) - (-gamma - 2.0 * LN_2)).abs() < 1e-13);
    }

    #[test]
    fn softplus_is_stable() {
        assert!((softplus(0.0) - LN_2).abs() < 1e-15);
        assert_eq!(softplus(1000.0), 1000.0);
        assert!(softplus(-1000.0) >= 0.0);
        assert!((sigmoid(0.0) - 0.5).abs() < 1e-15);
        assert_eq!(sigmoid(-1000.0), 0.0);
    }

    #[test]
    fn gaussian_expectation_moments() {
        assert!((gaussian_expectation(|_| 1.0) - 1.0).abs() < 1e-12);
        assert!((gaussian_expectation(|u| u * u) - 1.0).abs() < 1e-12);
        assert!((gaussian_expectation(|u| u.powi(4)) - 3.0).abs() < 1e-11);
    }
}
