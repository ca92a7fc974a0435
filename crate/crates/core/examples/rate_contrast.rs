//! Slow versus fast: the square-root MI bound decays like n^{-1/2} while the
//! (η,c)-central bound tracks the true 1/n generalization error.
//!
//! ```text
//! cargo run --release --example rate_contrast
//! ```

use genbound::bounds::{eta_c_bound, gaussian_lower_bounds, mi_sqrt_bound};
use genbound::mc::fit_rate;
use genbound::models::closed_form;
use genbound::LearningTuple;

fn main() -> genbound::Result<()> {
    let g = LearningTuple::gaussian_mean(0.0, 1.0)?;
    let (eta, c) = (0.125, 0.5);
    let mut curves: [Vec<(f64, f64)>; 4] = Default::default();
    println!("{:>8} {:>12} {:>12} {:>12} {:>12}", "n", "true_gen", "sqrt_mi", "eta_c", "lower");
    for n in [10usize, 100, 1_000, 10_000, 100_000] {
        let cf = closed_form(&g, n)?;
        let proxy = cf.subgaussian_proxy_loss.expect("gaussian loss is sub-Gaussian");
        let sqrt = mi_sqrt_bound(proxy, &cf.mi_per_sample)?.value;
        let fast = eta_c_bound(eta, c, cf.empirical_excess, &cf.mi_per_sample)?.value;
        let (lower, _) = gaussian_lower_bounds(&g, &cf.mi_per_sample, cf.empirical_excess, cf.gen_error)?;
        println!(
            "{:>8} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}",
            n, cf.gen_error, sqrt, fast, lower.value
        );
        let nf = n as f64;
        for (curve, v) in curves.iter_mut().zip([cf.gen_error, sqrt, fast, lower.value]) {
            curve.push((nf, v));
        }
    }
    println!();
    for (name, pts) in ["true_gen", "sqrt_mi", "eta_c", "lower"].iter().zip(&curves) {
        let f = fit_rate(pts)?;
        println!("{name:>9}: log-log slope {:+.4} (r^2 = {:.6})", f.slope, f.r_squared);
    }
    Ok(())
}
