//! Closed-form risks, mutual information and CGFs for every analytic model.
//!
//! ```text
//! cargo run --release --example closed_forms
//! ```

use genbound::learning::{LearningTuple, ModelId};
use genbound::models::{cgf, closed_form, excess_moments, CgfKind};

fn main() -> genbound::Result<()> {
    let n = 100;
    println!("n = {n}");
    println!(
        "{:<22} {:>12} {:>12} {:>13} {:>12} {:>14}",
        "model", "gen", "excess", "emp_excess", "mean_mi", "cgf(eta=0.1)"
    );
    for model in ModelId::ALL {
        if model == ModelId::LogisticRegression {
            // No closed form; see the logistic_experiment example.
            continue;
        }
        let tuple = LearningTuple::with_defaults(model);
        let cf = closed_form(&tuple, n)?;
        let mi = match cf.mi_total {
            Some(total) => total,
            None => cf.mean_mi(),
        };
        let k = cgf(&tuple, n, CgfKind::ExcessNeg, 0.1)?;
        println!(
            "{:<22} {:>12.6} {:>12.6} {:>13.6} {:>12.3e} {:>14.6}",
            model.name(),
            cf.gen_error,
            cf.excess,
            cf.empirical_excess,
            mi,
            k
        );
    }

    // The Gaussian mean: gen = 2σ²/n, E[r] = σ²/n, I(W; Z_i) = ½ ln(n/(n−1)).
    let g = LearningTuple::gaussian_mean(0.0, 1.0)?;
    println!("\ngaussian_mean, sigma = 1");
    println!("{:>8} {:>12} {:>12} {:>14}", "n", "gen", "E[r]", "I(W;Z_i)");
    for n in [2, 10, 100, 1_000, 10_000] {
        let cf = closed_form(&g, n)?;
        let m = excess_moments(&g, n)?;
        println!("{:>8} {:>12.3e} {:>12.3e} {:>14.6e}", n, cf.gen_error, m.mean, cf.mi_per_sample[0]);
    }
    Ok(())
}
