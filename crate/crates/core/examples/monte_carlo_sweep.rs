//! A seeded Monte-Carlo sweep over sample sizes, with a rate fit.
//!
//! ```text
//! cargo run --release --example monte_carlo_sweep
//! ```

use genbound::mc::{fit_rate, run_sweep, SweepConfig};
use genbound::LearningTuple;

fn main() -> genbound::Result<()> {
    let mut cfg = SweepConfig::new(LearningTuple::gaussian_mean(0.0, 1.0)?);
    cfg.n_grid = vec![50, 100, 200, 400, 800];
    cfg.repetitions = 20_000;
    cfg.master_seed = 2024;
    let res = run_sweep(&cfg)?;
    println!(
        "{:>5} {:>11} {:>10} {:>9} {:>11} {:>11}",
        "n", "mc_gen", "stderr", "2/n", "eta_c", "max_c"
    );
    for r in &res.rows {
        println!(
            "{:>5} {:>11.5} {:>10.5} {:>9.5} {:>11.5} {:>11.4}",
            r.n, r.gen_error.mean, r.gen_error.stderr, r.true_gen, r.bounds.eta_c, r.bounds.c_used
        );
    }
    let pts: Vec<(f64, f64)> = res.rows.iter().map(|r| (r.n as f64, r.gen_error.mean)).collect();
    let f = fit_rate(&pts)?;
    println!("\nmc gen slope {:+.3} +/- {:.3}", f.slope, f.slope_stderr);
    print!("\n{}", res.cgf_table().to_csv());
    Ok(())
}
