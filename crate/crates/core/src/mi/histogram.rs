//! Plug-in MI of an equal-frequency two-dimensional histogram.

use super::{Estimator, MiEstimate, MiFlag};
use crate::error::{invalid, Result};

/// Equal-frequency bin of each value by rank; tied values share the bin of
/// their first rank.
fn rank_bins(values: &[f64], bins: usize) -> Vec<usize> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut out = vec![0; n];
    let mut group_bin = 0;
    for (rank, &i) in order.iter().enumerate() {
        if rank == 0 || values[i] != values[order[rank - 1]] {
            group_bin = rank * bins / n;
        }
        out[i] = group_bin;
    }
    out
}

fn entropy(counts: &[usize], n: f64) -> (f64, usize) {
    let mut h = 0.0;
    let mut occupied = 0;
    for &c in counts.iter().filter(|&&c| c > 0) {
        let p = c as f64 / n;
        h -= p * p.ln();
        occupied += 1;
    }
    (h, occupied)
}

/// `Ĥ(X) + Ĥ(Y) − Ĥ(X, Y)` over `bins.0 × bins.1` equal-frequency cells.
///
/// The Miller–Madow bias `(K_xy − K_x − K_y + 1)/(2N)` over occupied cells is
/// reported in `bias_correction` and not subtracted.
pub fn histogram_mi(x: &[f64], y: &[f64], bins: (usize, usize)) -> Result<MiEstimate> {
    let n = x.len();
    if n != y.len() {
        return invalid(format!("sample counts differ: {n} vs {}", y.len()));
    }
    if bins.0 < 2 || bins.1 < 2 {
        return invalid(format!("need at least 2 bins per axis, got {bins:?}"));
    }
    if n < 2 {
        return invalid("histogram_mi needs at least 2 samples");
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return invalid("sample values must be finite");
    }
    let mut est = MiEstimate::new(0.0, Estimator::Histogram, None, n);
    let constant = |v: &[f64]| v.iter().all(|&a| a == v[0]);
    if constant(x) || constant(y) {
        est.flag(MiFlag::DegenerateAxis);
        est.warnings.push("constant axis: mutual information reported as 0".into());
        return Ok(est);
    }
    let (bx, by) = (rank_bins(x, bins.0), rank_bins(y, bins.1));
    let mut joint = vec![0usize; bins.0 * bins.1];
    let mut mx = vec![0usize; bins.0];
    let mut my = vec![0usize; bins.1];
    for i in 0..n {
        joint[bx[i] * bins.1 + by[i]] += 1;
        mx[bx[i]] += 1;
        my[by[i]] += 1;
    }
    let nf = n as f64;
    let (hx, kx) = entropy(&mx, nf);
    let (hy, ky) = entropy(&my, nf);
    let (hxy, kxy) = entropy(&joint, nf);
    let raw = hx + hy - hxy;
    est.raw_value = raw;
    est.value = raw.max(0.0);
    est.bias_correction = Some((kxy as f64 - kx as f64 - ky as f64 + 1.0) / (2.0 * nf));
    let ceiling = hx.min(hy);
    if raw >= 0.95 * ceiling {
        est.flag(MiFlag::Saturated);
        est.warnings.push(format!("estimate is at the histogram ceiling {ceiling:.6}"));
    }
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_saturates_at_ln_bins() {
        let x: Vec<f64> = (0..1000).map(|i| ((i * 37) % 1000) as f64).collect();
        let e = histogram_mi(&x, &x, (8, 8)).unwrap();
        assert!((e.value - 8f64.ln()).abs() < 1e-12);
        assert!(e.has_flag(MiFlag::Saturated));
    }

    #[test]
    fn degenerate_and_invalid() {
        let x = [1.0, 2.0, 3.0];
        let e = histogram_mi(&x, &[5.0; 3], (2, 2)).unwrap();
        assert_eq!(e.value, 0.0);
        assert!(e.has_flag(MiFlag::DegenerateAxis));
        assert!(histogram_mi(&x, &x, (1, 2)).is_err());
        assert!(histogram_mi(&x, &x[..2], (2, 2)).is_err());
    }

    #[test]
    fn ties_share_a_bin() {
        let b = rank_bins(&[0.0, 0.0, 0.0, 1.0], 2);
        assert_eq!(b, vec![0, 0, 0, 1]);
    }
}
