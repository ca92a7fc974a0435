//! Logistic regression: empirical c at η = 0.8, chain-rule MI, and the bound
//! curves against Monte-Carlo generalization and excess risk.
//!
//! ```text
//! cargo run --release --example logistic_experiment -- 500
//! ```
//! The optional argument is the number of repetitions per n (default 100).

use genbound::mc::{reproduce_example, ExampleId, ReproOptions};

fn main() -> genbound::Result<()> {
    let reps = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100);
    let opts = ReproOptions {
        seed: ReproOptions::default().seed,
        reps: Some(reps),
    };
    let bundle = reproduce_example(ExampleId::Sec53, &opts)?;
    print!("{}", bundle.curves.to_csv());
    for t in bundle.tables.iter().filter(|t| t.name.starts_with("sec_5_3")) {
        print!("\n{}\n{}", t.name, t.to_csv());
    }
    for (curve, f) in &bundle.fits {
        println!("{curve:>14}: slope {:+.3}", f.slope);
    }
    for v in &bundle.verdicts {
        println!("{}", v.line());
        for d in &v.details {
            println!("    {d}");
        }
    }
    Ok(())
}
