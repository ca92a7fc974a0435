//! Mutual-information estimators against known answers.
//!
//! ```text
//! cargo run --release --example mutual_information
//! ```

use genbound::mi::{closed_form_mi, correlated_gaussian, histogram_mi, ksg_mi, mixed_mi, Points};
use genbound::models::{discrete_mean_mi_quadrature, train};
use genbound::{LearningTuple, ModelId, RngStream};

fn main() -> genbound::Result<()> {
    println!("KSG (k = 3) on correlated Gaussian pairs, N = 5000");
    for rho in [0.0, 0.5, 0.9] {
        let (x, y) = correlated_gaussian(5_000, rho, RngStream::new(42, 0));
        let ksg = ksg_mi(Points::scalar(&x)?, Points::scalar(&y)?, 3)?;
        let hist = histogram_mi(&x, &y, (16, 16))?;
        let truth = -0.5 * (1.0 - rho * rho).ln();
        println!(
            "  rho = {rho:<4} truth {truth:.4}  ksg {:.4}  histogram {:.4} (bias corr. {:.4})",
            ksg.value,
            hist.value,
            hist.bias_correction.unwrap_or(0.0)
        );
    }

    // I(W; Z_1) for the discrete mean, where W ∈ {−1, 1} is discrete.
    let n = 4;
    let tuple = LearningTuple::with_defaults(ModelId::DiscreteMean);
    let (mut w, mut z) = (Vec::new(), Vec::new());
    for r in 0..20_000 {
        let (draw, _) = train(&tuple, n, RngStream::new(7, r))?;
        w.push(draw.hypothesis[0] as i64);
        z.push(draw.dataset.sample(0)[0]);
    }
    let est = mixed_mi(&w, Points::scalar(&z)?, 3)?;
    let upper = closed_form_mi(&tuple, n)?;
    let exact = discrete_mean_mi_quadrature(n, tuple.params.mean, tuple.params.noise_sd)?;
    println!(
        "\ndiscrete_mean n = {n}: mixed estimator {:.4}, quadrature {exact:.4}, closed-form upper bound {:.4}",
        est.value, upper[0].value
    );
    Ok(())
}
