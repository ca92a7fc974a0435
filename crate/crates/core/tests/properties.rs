//! Property tests for the invariants shared across modules.

use genbound::bounds::{eta_c_bound, fast_subgaussian_bound, gaussian_lower_bounds, mi_sqrt_bound};
use genbound::conditions::{
    bernstein_check, bernstein_to_eta_c, empirical_cgf, eta_c_check, eta_c_scan, subexp_to_eta_c, subgamma_to_eta_c,
    CgfSource, MomentSource,
};
use genbound::learning::{excess_loss, risk_record, Population};
use genbound::mc::{fit_rate, format_g9, Cell, Table};
use genbound::mi::{chain_rule_mi, ksg_mi, Points};
use genbound::models::{cgf, closed_form, excess_moments, train, CgfEvaluator, CgfKind};
use genbound::{LearningTuple, ModelId, RngStream};
use proptest::prelude::*;
use rand::Rng;

const CLOSED_FORM_MODELS: [ModelId; 5] = [
    ModelId::GaussianMean,
    ModelId::DiscreteMean,
    ModelId::ZeroMeanDiscrete,
    ModelId::LinearRegression,
    ModelId::HypothesisSelection,
];

fn closed_model() -> impl Strategy<Value = ModelId> {
    prop::sample::select(CLOSED_FORM_MODELS.to_vec())
}

fn tuple(model: ModelId, sigma: f64) -> LearningTuple {
    let mut t = LearningTuple::with_defaults(model);
    t.params.noise_sd = sigma;
    t.validate().expect("valid parameters");
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn risk_identity_and_zero_excess_at_optimum(
        model in closed_model(),
        sigma in 0.3f64..3.0,
        n in 2usize..40,
        seed in any::<u64>(),
    ) {
        let t = tuple(model, sigma);
        let (draw, _) = train(&t, n, RngStream::new(seed, 0)).unwrap();
        let r = risk_record(&t, &draw, Population::ClosedForm).unwrap();
        prop_assert_eq!(r.gen_error, r.population_risk - r.empirical_risk);
        if !model.dataset_level() {
            let w_star = t.w_star();
            for z in draw.dataset.iter() {
                prop_assert_eq!(excess_loss(&t, &w_star, z).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn identical_streams_give_identical_draws(seed in any::<u64>(), idx in any::<u64>(), n in 2usize..30) {
        for model in ModelId::ALL {
            let t = LearningTuple::with_defaults(model);
            let (a, _) = train(&t, n, RngStream::new(seed, idx)).unwrap();
            let (b, _) = train(&t, n, RngStream::new(seed, idx)).unwrap();
            prop_assert_eq!(a.dataset.values(), b.dataset.values());
            prop_assert_eq!(a.hypothesis, b.hypothesis);
        }
    }

    #[test]
    fn cgf_vanishes_at_zero_and_is_convex(
        model in closed_model(),
        sigma in 0.3f64..2.0,
        n in 2usize..200,
        u in 0.05f64..0.95,
        v in 0.05f64..0.95,
    ) {
        let t = tuple(model, sigma);
        for kind in [CgfKind::ExcessNeg, CgfKind::ExcessPos, CgfKind::LossNeg, CgfKind::LossPos] {
            let Ok(ev) = CgfEvaluator::new(&t, n, kind) else { continue };
            prop_assert!(ev.eval(0.0).unwrap().abs() <= 1e-12);
            let hi = ev.domain().1.min(4.0);
            let (a, b) = (hi * u.min(v), hi * u.max(v));
            let m = 0.5 * (a + b);
            let (fa, fb, fm) = (ev.eval(a).unwrap(), ev.eval(b).unwrap(), ev.eval(m).unwrap());
            prop_assert!(fm <= 0.5 * (fa + fb) + 1e-10 * (1.0 + fa.abs() + fb.abs()), "{kind:?}: {fa} {fm} {fb}");
        }
    }

    #[test]
    fn max_c_is_nonincreasing_in_eta(
        model in prop::sample::select(vec![ModelId::GaussianMean, ModelId::DiscreteMean, ModelId::LinearRegression]),
        sigma in 0.5f64..2.0,
        n in 2usize..40,
    ) {
        let t = tuple(model, sigma);
        let hi = CgfEvaluator::new(&t, n, CgfKind::ExcessNeg).unwrap().domain().1.min(5.0);
        let grid: Vec<f64> = (1..=20).map(|i| hi * i as f64 / 21.0).collect();
        let reports = eta_c_scan(CgfSource::ClosedForm { tuple: &t, n }, &grid).unwrap();
        let cs: Vec<f64> = reports.iter().filter_map(|r| r.max_c).collect();
        for w in cs.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9, "{cs:?}");
        }
    }

    #[test]
    fn empirical_cgf_is_translation_consistent(
        values in prop::collection::vec(-3.0f64..3.0, 1..200),
        k in -5.0f64..5.0,
        eta in 0.01f64..3.0,
    ) {
        let shifted: Vec<f64> = values.iter().map(|v| v + k).collect();
        let a = empirical_cgf(&values, eta).unwrap();
        let b = empirical_cgf(&shifted, eta).unwrap();
        prop_assert!((b - (a - eta * k)).abs() <= 1e-12 * (1.0 + a.abs() + (eta * k).abs()));
    }

    #[test]
    fn counterexamples_fail_for_every_eta(eta in 0.001f64..10.0, n in 2usize..200) {
        for t in [
            LearningTuple::zero_mean_discrete(1.0).unwrap(),
            LearningTuple::hypothesis_selection(0.0, 1.0).unwrap(),
        ] {
            let m = excess_moments(&t, n).unwrap().mean;
            prop_assert!(m.abs() <= 1e-15);
            let value = cgf(&t, n, CgfKind::ExcessNeg, eta).unwrap();
            prop_assert!(value > 0.0);
            prop_assert!(!eta_c_check(value, m, eta).holds);
        }
    }

    #[test]
    fn implied_pairs_hold_on_the_gaussian_mean(sigma in 0.3f64..3.0, n in 2usize..10_000) {
        let g = LearningTuple::gaussian_mean(0.0, sigma).unwrap();
        let s2 = sigma * sigma;
        let nf = n as f64;
        let mean = excess_moments(&g, n).unwrap().mean;
        let (b_min, _) = bernstein_check(MomentSource::ClosedForm { tuple: &g, n }, 1.0, None).unwrap();
        let pairs = [
            bernstein_to_eta_c(b_min, s2).unwrap(),
            subexp_to_eta_c(8.0 * s2 * s2 / nf, 8.0 * s2, mean).unwrap(),
            subgamma_to_eta_c(8.0 * s2 * s2 / nf, 0.0, mean).unwrap(),
        ];
        for (eta, c) in pairs {
            let r = eta_c_check(cgf(&g, n, CgfKind::ExcessNeg, eta).unwrap(), mean, eta);
            prop_assert!(r.holds && r.max_c.unwrap() >= c, "eta {eta} c {c} -> {:?}", r.max_c);
        }
    }

    #[test]
    fn bounds_are_monotone_in_mi_and_c(
        mi in prop::collection::vec(0.0f64..2.0, 1..20),
        bump in 0.0f64..1.0,
        idx in any::<prop::sample::Index>(),
        c1 in 0.05f64..1.0,
        c2 in 0.05f64..1.0,
        emp in -1.0f64..1.0,
        eta in 0.05f64..2.0,
    ) {
        let mut more = mi.clone();
        more[idx.index(mi.len())] += bump;
        let sq = |m: &[f64]| mi_sqrt_bound(1.0, m).unwrap().value;
        let ec = |c: f64, m: &[f64]| eta_c_bound(eta, c, emp, m).unwrap().value;
        prop_assert!(sq(&more) >= sq(&mi));
        prop_assert!(ec(0.5, &more) >= ec(0.5, &mi));
        // d/dc of the (η,c) bound is −(emp + mean(I)/η)/c²: non-increasing in c
        // exactly when emp + mean(I)/η ≥ 0, in particular whenever emp ≥ 0.
        let (lo, hi) = (c1.min(c2), c1.max(c2));
        let slope_sign = emp + mi.iter().sum::<f64>() / mi.len() as f64 / eta;
        let tol = 1e-12 * (1.0 + ec(lo, &mi).abs());
        if slope_sign >= 0.0 {
            prop_assert!(ec(hi, &mi) <= ec(lo, &mi) + tol);
        } else {
            prop_assert!(ec(hi, &mi) >= ec(lo, &mi) - tol);
        }
        let fast = |m: &[f64]| fast_subgaussian_bound(1.0, 0.5, 1.0, m, emp).unwrap().value;
        prop_assert!(fast(&more) >= fast(&mi));
    }

    #[test]
    fn gaussian_sandwich(sigma in 0.2f64..5.0, n in 2usize..100_000) {
        let g = LearningTuple::gaussian_mean(0.0, sigma).unwrap();
        let cf = closed_form(&g, n).unwrap();
        let s2 = sigma * sigma;
        let (lo, _) = gaussian_lower_bounds(&g, &cf.mi_per_sample, cf.empirical_excess, cf.gen_error).unwrap();
        let up = eta_c_bound(0.125 / s2, 0.5, cf.empirical_excess, &cf.mi_per_sample).unwrap().value;
        let gen = 2.0 * s2 / n as f64;
        prop_assert!(lo.value <= gen * (1.0 + 1e-12) && gen <= up, "{} {gen} {up}", lo.value);
    }

    #[test]
    fn ksg_is_symmetric_and_nonnegative(seed in any::<u64>(), rho in -0.95f64..0.95, n in 20usize..300) {
        let mut rng = RngStream::new(seed, 0).rng();
        let x: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let y: Vec<f64> = x.iter().map(|v| rho * v + (1.0 - rho.abs()) * rng.gen::<f64>()).collect();
        let a = ksg_mi(Points::scalar(&x).unwrap(), Points::scalar(&y).unwrap(), 3).unwrap();
        let b = ksg_mi(Points::scalar(&y).unwrap(), Points::scalar(&x).unwrap(), 3).unwrap();
        prop_assert_eq!(a.raw_value.to_bits(), b.raw_value.to_bits());
        prop_assert!(a.value >= 0.0 && a.value == a.raw_value.max(0.0));
    }

    #[test]
    fn chain_rule_components_recombine(seed in any::<u64>(), n in 40usize..300) {
        let mut rng = RngStream::new(seed, 1).rng();
        let w: Vec<f64> = (0..2 * n).map(|_| rng.gen::<f64>()).collect();
        let x: Vec<f64> = (0..2 * n).map(|i| w[i] + rng.gen::<f64>()).collect();
        let y: Vec<i64> = (0..n).map(|i| i64::from(x[2 * i] > 1.0)).collect();
        let e = chain_rule_mi(Points::new(&w, 2).unwrap(), Points::new(&x, 2).unwrap(), &y, 3).unwrap();
        let c = e.components.as_ref().expect("components");
        prop_assert!((c.recombine() - e.value).abs() <= 1e-12);
    }

    #[test]
    fn rate_fit_recovers_power_laws(alpha in 0.1f64..2.0, scale in 0.01f64..100.0) {
        let pts: Vec<(f64, f64)> = [10.0, 100.0, 1e3, 1e4, 1e5].iter().map(|&n: &f64| (n, scale * n.powf(-alpha))).collect();
        let f = fit_rate(&pts).unwrap();
        prop_assert!((f.slope + alpha).abs() <= 1e-9);
    }

    #[test]
    fn g9_keeps_nine_significant_digits(v in prop::num::f64::NORMAL) {
        let s = format_g9(v);
        let back: f64 = s.parse().unwrap();
        prop_assert!((back - v).abs() <= 5e-9 * v.abs(), "{v} -> {s}");
        let mut t = Table::new("t", &["v"]);
        t.push(vec![Cell::Float(v)]);
        prop_assert_eq!(t.to_csv(), format!("v\n{s}\n"));
    }
}
