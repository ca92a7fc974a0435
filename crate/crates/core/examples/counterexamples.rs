//! Problems where the (η,c)-central condition fails for every η.
//!
//! ```text
//! cargo run --release --example counterexamples
//! ```

use genbound::conditions::{eta_c_scan, CgfSource};
use genbound::models::closed_form;
use genbound::LearningTuple;

fn main() -> genbound::Result<()> {
    let grid = [0.1, 0.5, 1.0, 2.0];
    let cases = [
        (LearningTuple::zero_mean_discrete(1.0)?, 100),
        (LearningTuple::hypothesis_selection(0.0, 1.0)?, 10),
    ];
    for (tuple, n) in &cases {
        let cf = closed_form(tuple, *n)?;
        println!("{} n = {n}: gen = {:.6}, excess = {:.6}", tuple.model, cf.gen_error, cf.excess);
        for r in eta_c_scan(CgfSource::ClosedForm { tuple, n: *n }, &grid)? {
            println!(
                "  eta = {:<4} cgf = {:>9.5}  E[r] = {:+.4}  holds = {:<5} {}",
                r.eta,
                r.cgf,
                r.mean_r,
                r.holds,
                r.reason.as_deref().unwrap_or("")
            );
        }
    }
    Ok(())
}
