//! Least-squares rate fits.

use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};

/// Ordinary least squares `y ≈ intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub r_squared: f64,
}

pub fn fit_linear(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return invalid(format!("fit needs equal lengths, got {} and {}", x.len(), y.len()));
    }
    if x.len() < 3 {
        return invalid(format!("fit needs at least 3 points, got {}", x.len()));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return invalid("fit points must be finite");
    }
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return invalid("fit needs at least two distinct abscissae");
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    Ok(LinearFit {
        slope,
        intercept,
        slope_stderr: (ssr / (m - 2.0) / sxx).sqrt(),
        r_squared: if syy > 0.0 { 1.0 - ssr / syy } else { 1.0 },
    })
}

/// Log-log fit `ln value ≈ intercept + slope·ln n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub r_squared: f64,
    /// Points used in the fit.
    pub points: Vec<(f64, f64)>,
    /// Points dropped because `n` or the value was not positive and finite.
    pub excluded: Vec<(f64, f64)>,
}

pub fn fit_rate(points: &[(f64, f64)]) -> Result<RateFit> {
    let (used, excluded): (Vec<_>, Vec<_>) = points
        .iter()
        .copied()
        .partition(|&(n, v)| n > 0.0 && v > 0.0 && n.is_finite() && v.is_finite());
    if used.len() < 3 {
        return invalid(format!(
            "rate fit needs at least 3 positive points, got {} of {}",
            used.len(),
            points.len()
        ));
    }
    let lx: Vec<f64> = used.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = used.iter().map(|p| p.1.ln()).collect();
    let f = fit_linear(&lx, &ly)?;
    Ok(RateFit {
        slope: f.slope,
        intercept: f.intercept,
        slope_stderr: f.slope_stderr,
        r_squared: f.r_squared,
        points: used,
        excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws() {
        let ns = [10.0, 100.0, 1000.0, 1e4];
        let f = fit_rate(&ns.map(|n| (n, 3.0 / n))).unwrap();
        assert!((f.slope + 1.0).abs() < 1e-9 && f.slope_stderr < 1e-9);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-9);
        let f = fit_rate(&ns.map(|n: f64| (n, 0.7 / n.sqrt()))).unwrap();
        assert!((f.slope + 0.5).abs() < 1e-9);
    }

    #[test]
    fn drops_nonpositive_points() {
        let pts = [(1.0, 1.0), (2.0, 0.5), (3.0, -1.0), (4.0, 0.25)];
        let f = fit_rate(&pts).unwrap();
        assert_eq!(f.excluded, vec![(3.0, -1.0)]);
        assert!((f.slope + 1.0).abs() < 1e-12);
        assert!(fit_rate(&pts[..3]).is_err());
    }
}
