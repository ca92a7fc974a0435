//! Nearest-neighbour MI estimators: KSG (variant 1), a mixed
//! discrete-continuous estimator, and their chain-rule combination.

use super::neighbors::SortedIndex;
use super::{ChainComponents, Estimator, MiEstimate, MiFlag, Points};
use crate::error::{invalid, Result};
use crate::special::digamma;
use rayon::prelude::*;
use std::collections::BTreeMap;

pub const DEFAULT_K: usize = 3;

fn check_pair(nx: usize, ny: usize, k: usize) -> Result<()> {
    if nx != ny {
        return invalid(format!("sample counts differ: {nx} vs {ny}"));
    }
    if k == 0 {
        return invalid("k must be at least 1");
    }
    if k + 2 > nx {
        return invalid(format!("k = {k} needs at least {} samples, got {nx}", k + 2));
    }
    Ok(())
}

/// Kraskov estimator, variant 1, with max-norm neighbourhoods.
///
/// `I = ψ(k) + ψ(N) − ⟨ψ(n_x + 1) + ψ(n_y + 1)⟩`, where `n_x` counts points
/// strictly closer in `x` than the `k`-th joint neighbour. Swapping `x` and `y`
/// gives a bit-identical result.
pub fn ksg_mi(x: Points<'_>, y: Points<'_>, k: usize) -> Result<MiEstimate> {
    let n = x.len();
    check_pair(n, y.len(), k)?;
    let mut est = MiEstimate::new(0.0, Estimator::Ksg, Some(k), n);
    if x.is_constant() || y.is_constant() {
        est.flag(MiFlag::DegenerateAxis);
        est.warnings.push("constant axis: mutual information reported as 0".into());
        return Ok(est);
    }
    let joint: Vec<f64> = (0..n).flat_map(|i| x.point(i).iter().chain(y.point(i)).copied()).collect();
    let joint = Points::new(&joint, x.dim() + y.dim())?;
    let (jidx, xidx, yidx) = (SortedIndex::all(joint), SortedIndex::all(x), SortedIndex::all(y));
    let per_point: Vec<(f64, f64, bool)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let eps = jidx.kth_distance(i, k);
            let cx = xidx.count_within(i, eps, false);
            let cy = yidx.count_within(i, eps, false);
            (digamma(cx as f64 + 1.0) + digamma(cy as f64 + 1.0), eps, cx < k && cy < k)
        })
        .collect();
    let mean: f64 = per_point.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let raw = digamma(k as f64) + digamma(n as f64) - mean;
    est.raw_value = raw;
    est.value = raw.max(0.0);
    if per_point.iter().any(|p| p.1 == 0.0) {
        est.warnings.push("coincident joint points: neighbour radius 0".into());
    }
    if 2 * per_point.iter().filter(|p| p.2).count() >= n {
        est.flag(MiFlag::DeterministicRelation);
        est.warnings.push("marginal and joint neighbourhoods coincide: the variables look functionally related".into());
    }
    Ok(est)
}

/// MI between a discrete label and a continuous vector.
///
/// Labels are at distance 0 from their own class and infinitely far from
/// others, so joint neighbours are within-class neighbours. With `d_i` the
/// distance to the `k`-th same-class neighbour, `k̃_i` the number of same-class
/// points within `d_i` (coincident points included) and `m_i` the number of
/// all points within `d_i`, the estimate is
/// `ψ(N) − ⟨ψ(N_{y_i})⟩ + ⟨ψ(k̃_i)⟩ − ⟨ψ(m_i)⟩`, which is exactly 0 for a
/// single class.
pub fn mixed_mi(labels: &[i64], cont: Points<'_>, k: usize) -> Result<MiEstimate> {
    let n = labels.len();
    check_pair(n, cont.len(), k)?;
    let mut est = MiEstimate::new(0.0, Estimator::MixedDc, Some(k), n);
    let mut classes: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        classes.entry(l).or_default().push(i);
    }
    let full = SortedIndex::all(cont);
    let mut terms: Vec<f64> = Vec::with_capacity(n);
    for (label, members) in classes {
        let nc = members.len();
        if nc == 1 {
            est.warnings.push(format!("label {label} has a single member; its point is skipped"));
            continue;
        }
        let kc = k.min(nc - 1);
        if kc < k {
            est.flag(MiFlag::ReducedK);
            est.warnings.push(format!("label {label} has {nc} members; using k = {kc}"));
        }
        let class_idx = SortedIndex::new(cont, members.clone());
        let class_term = digamma(n as f64) - digamma(nc as f64);
        let class_terms: Vec<f64> = members
            .par_iter()
            .map(|&i| {
                let d = class_idx.kth_distance(i, kc);
                let kt = class_idx.count_within(i, d, true);
                let m = full.count_within(i, d, true);
                class_term + (digamma(kt as f64) - digamma(m as f64))
            })
            .collect();
        terms.extend(class_terms);
    }
    if terms.is_empty() {
        est.warnings.push("no label class has two members; mutual information reported as 0".into());
        return Ok(est);
    }
    let raw = terms.iter().sum::<f64>() / terms.len() as f64;
    est.raw_value = raw;
    est.value = raw.max(0.0);
    Ok(est)
}

/// `I(W; X, Y) = I(W; Y) + Σ_y P(y) I(W; X | Y = y)` for binary labels `Y`.
///
/// `I(W; Y)` uses [`mixed_mi`]; each conditional term uses [`ksg_mi`] on the
/// rows with that label. A label with too few rows for the conditional
/// estimator contributes 0.
pub fn chain_rule_mi(w: Points<'_>, x: Points<'_>, y: &[i64], k: usize) -> Result<MiEstimate> {
    let n = y.len();
    check_pair(w.len(), x.len(), k)?;
    check_pair(n, w.len(), k)?;
    if y.iter().any(|&l| l != 0 && l != 1) {
        return invalid("chain_rule_mi needs labels in {0, 1}");
    }
    let mut est = MiEstimate::new(0.0, Estimator::ChainRule, Some(k), n);
    let wy = mixed_mi(y, w, k)?;
    est.warnings.extend(wy.warnings.iter().cloned());
    let mut raw = [0.0; 2];
    let mut clipped = [0.0; 2];
    let mut p = [0.0; 2];
    for label in 0..2 {
        let rows: Vec<usize> = (0..n).filter(|&i| y[i] == label as i64).collect();
        p[label] = rows.len() as f64 / n as f64;
        if rows.is_empty() {
            continue;
        }
        if rows.len() < k + 2 {
            est.warnings.push(format!("label {label} has {} rows; its conditional term is 0", rows.len()));
            continue;
        }
        let (wd, xd) = (w.gather(&rows), x.gather(&rows));
        let cond = ksg_mi(Points::new(&wd, w.dim())?, Points::new(&xd, x.dim())?, k)?;
        for f in &cond.flags {
            est.flag(*f);
        }
        est.warnings.extend(cond.warnings.into_iter().map(|m| format!("given label {label}: {m}")));
        raw[label] = cond.raw_value;
        clipped[label] = cond.value;
    }
    let components = ChainComponents {
        i_wy: wy.value,
        i_wx_given_y0: clipped[0],
        i_wx_given_y1: clipped[1],
        p_y0: p[0],
        p_y1: p[1],
    };
    est.value = components.recombine();
    est.raw_value = wy.raw_value + p[0] * raw[0] + p[1] * raw[1];
    est.components = Some(components);
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use rand_distr::{Distribution, StandardNormal};

    fn gaussian_pair(n: usize, rho: f64, seed: u64) -> (Vec<f64>, Vec<f64>) {
        let mut rng = RngStream::new(seed, 0).rng();
        let mut x = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        for _ in 0..n {
            let a: f64 = StandardNormal.sample(&mut rng);
            let b: f64 = StandardNormal.sample(&mut rng);
            x.push(a);
            y.push(rho * a + (1.0 - rho * rho).sqrt() * b);
        }
        (x, y)
    }

    #[test]
    fn ksg_rejects_bad_input() {
        let a = [0.0, 1.0, 2.0];
        let p = Points::scalar(&a).unwrap();
        assert!(ksg_mi(p, p, 2).is_err());
        assert!(ksg_mi(p, p, 0).is_err());
        assert!(ksg_mi(p, Points::scalar(&a[..2]).unwrap(), 1).is_err());
    }

    #[test]
    fn ksg_symmetric_and_close() {
        let (x, y) = gaussian_pair(2000, 0.9, 3);
        let (px, py) = (Points::scalar(&x).unwrap(), Points::scalar(&y).unwrap());
        let a = ksg_mi(px, py, 3).unwrap();
        let b = ksg_mi(py, px, 3).unwrap();
        assert_eq!(a.raw_value.to_bits(), b.raw_value.to_bits());
        assert!((a.value - 0.830_366).abs() < 0.08, "{}", a.value);
        assert!(!a.has_flag(MiFlag::DeterministicRelation));
    }

    #[test]
    fn ksg_flags_identity_and_constants() {
        let (x, _) = gaussian_pair(1000, 0.0, 5);
        let p = Points::scalar(&x).unwrap();
        let e = ksg_mi(p, p, 3).unwrap();
        assert!(e.has_flag(MiFlag::DeterministicRelation) && e.value > 4.0);
        let c = vec![1.0; 1000];
        let e = ksg_mi(p, Points::scalar(&c).unwrap(), 3).unwrap();
        assert_eq!(e.value, 0.0);
        assert!(e.has_flag(MiFlag::DegenerateAxis));
    }

    #[test]
    fn mixed_single_class_is_zero() {
        let (x, _) = gaussian_pair(500, 0.0, 1);
        let e = mixed_mi(&vec![4; 500], Points::scalar(&x).unwrap(), 3).unwrap();
        assert_eq!(e.raw_value, 0.0);
    }

    #[test]
    fn mixed_sign_label_is_ln2() {
        let (x, _) = gaussian_pair(4000, 0.0, 2);
        let labels: Vec<i64> = x.iter().map(|&v| (v >= 0.0) as i64).collect();
        let e = mixed_mi(&labels, Points::scalar(&x).unwrap(), 3).unwrap();
        assert!((e.value - std::f64::consts::LN_2).abs() < 0.05, "{}", e.value);
    }

    #[test]
    fn mixed_reduces_k_for_small_classes() {
        let x: Vec<f64> = (0..20).map(|i| i as f64 * 0.1).collect();
        let mut labels = vec![0i64; 20];
        labels[3] = 1;
        labels[9] = 1;
        labels[15] = 2;
        let e = mixed_mi(&labels, Points::scalar(&x).unwrap(), 3).unwrap();
        assert!(e.has_flag(MiFlag::ReducedK));
        assert!(e.warnings.iter().any(|w| w.contains("single member")));
    }

    #[test]
    fn chain_rule_identity_coupling() {
        let n = 2000;
        let y: Vec<i64> = (0..n).map(|i| (i % 2) as i64).collect();
        let w: Vec<f64> = y.iter().map(|&v| v as f64).collect();
        let (x, _) = gaussian_pair(n, 0.0, 9);
        let e = chain_rule_mi(Points::scalar(&w).unwrap(), Points::scalar(&x).unwrap(), &y, 3).unwrap();
        let c = e.components.unwrap();
        assert!((c.i_wy - std::f64::consts::LN_2).abs() < 0.01, "{}", c.i_wy);
        assert_eq!((c.i_wx_given_y0, c.i_wx_given_y1), (0.0, 0.0));
        assert!((e.value - c.recombine()).abs() <= 1e-12);
    }

    #[test]
    fn chain_rule_missing_label() {
        let (w, x) = gaussian_pair(50, 0.3, 4);
        let y = vec![1i64; 50];
        let e = chain_rule_mi(Points::scalar(&w).unwrap(), Points::scalar(&x).unwrap(), &y, 3).unwrap();
        let c = e.components.unwrap();
        assert_eq!((c.p_y0, c.i_wx_given_y0, c.i_wy), (0.0, 0.0, 0.0));
        assert_eq!(e.value, c.recombine());
        assert!(chain_rule_mi(Points::scalar(&w).unwrap(), Points::scalar(&x).unwrap(), &vec![2; 50], 3).is_err());
    }
}
