//! Checking fast-rate conditions: closed-form and empirical (η,c)-central
//! scans, the Bernstein condition, implication maps and the (v,c) family.
//!
//! ```text
//! cargo run --release --example condition_checks
//! ```

use genbound::conditions::{
    bernstein_check, bernstein_to_eta_c, eta_c_check, eta_c_scan, subexp_to_eta_c, v_central_check, Bootstrap,
    CgfSource, ExcessSamples, MomentSource, VRate,
};
use genbound::learning::excess_loss;
use genbound::models::{cgf, excess_moments, sample_dataset, train, CgfKind};
use genbound::{LearningTuple, RngStream};

fn main() -> genbound::Result<()> {
    let g = LearningTuple::gaussian_mean(0.0, 1.0)?;
    let n = 100;

    println!("closed-form (eta,c)-central scan, gaussian_mean n = {n}");
    let grid = [0.05, 0.125, 0.25, 0.5, 0.75];
    for r in eta_c_scan(CgfSource::ClosedForm { tuple: &g, n }, &grid)? {
        println!(
            "  eta = {:<6} cgf = {:+.3e}  max_c = {:.4}  holds = {}",
            r.eta,
            r.cgf,
            r.max_c.unwrap_or(f64::NAN),
            r.holds
        );
    }

    // The same check from samples of r(W, Z') with a bootstrap interval.
    let values: Vec<f64> = (0..20_000u64)
        .map(|i| {
            let stream = RngStream::new(1, i);
            let (draw, _) = train(&g, n, stream)?;
            let z = sample_dataset(&g, 1, &mut stream.derive(1).rng())?;
            excess_loss(&g, &draw.hypothesis, z.sample(0))
        })
        .collect::<genbound::Result<_>>()?;
    let samples = ExcessSamples::iid(values)?;
    let boot = Bootstrap::new(RngStream::new(1, 0));
    for r in eta_c_scan(CgfSource::Samples { samples: &samples, bootstrap: boot }, &[0.125, 0.25])? {
        let [lo, hi] = r.max_c_ci.unwrap_or([f64::NAN; 2]);
        println!(
            "  empirical eta = {:<6} max_c = {:.3} (95% CI {:.3}..{:.3})",
            r.eta,
            r.max_c.unwrap_or(f64::NAN),
            lo,
            hi
        );
    }

    println!("\nBernstein (beta = 1) and implied (eta, c) pairs");
    let (b_min, report) = bernstein_check(MomentSource::ClosedForm { tuple: &g, n }, 1.0, Some(7.0))?;
    println!("  B_min = {b_min:.4}, holds with B = 7: {}", report.holds);
    let mean = excess_moments(&g, n)?.mean;
    let pairs = [
        ("bernstein", bernstein_to_eta_c(b_min, 1.0)?),
        ("sub-exponential", subexp_to_eta_c(8.0 / n as f64, 8.0, mean)?),
    ];
    for (name, (eta, c)) in pairs {
        let r = eta_c_check(cgf(&g, n, CgfKind::ExcessNeg, eta)?, mean, eta);
        println!(
            "  {name:<16} eta = {eta:.4}, c = {c:.3}; closed-form max_c = {:.4}",
            r.max_c.unwrap_or(f64::NAN)
        );
    }

    println!("\n(v,c)-central with v(eps) = 10 eps (beta = 0)");
    let rate = VRate { beta: 0.0, scale: 10.0 };
    for r in v_central_check(CgfSource::ClosedForm { tuple: &g, n }, rate, &[0.001, 0.01, 0.05])? {
        println!(
            "  eps = {:<6} eta = v(eps) = {:.3}  holds = {}",
            r.epsilon.unwrap_or(f64::NAN),
            r.eta,
            r.holds
        );
    }
    Ok(())
}
