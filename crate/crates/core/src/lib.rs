//! Numerical laboratory for information-theoretic generalization bounds.
//!
//! The crate evaluates mutual-information generalization bounds and fast-rate
//! conditions on six analytically solvable learning problems, and checks them
//! against closed forms and Monte-Carlo simulation.
//!
//! - [`learning`]: learning tuples, datasets, losses and risk records.
//! - [`models`]: samplers, ERM solvers, closed forms and exact CGFs.
//! - [`bounds`]: every bound formula, evaluated from explicit MI values.
//! - [`conditions`]: (η,c)-central, Bernstein, witness and (v,c)-central checks.
//! - [`mi`]: closed-form MI plus KSG, mixed and histogram estimators.
//! - [`mc`]: the Monte-Carlo sweep engine, rate fits and reproductions.
//! - [`cli`]: configuration, output tables and the `genbound` commands.
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! ```text
//! cargo run --release --example closed_forms
//! cargo run --release --example rate_contrast
//! cargo run --release --example condition_checks
//! cargo run --release --example mutual_information
//! cargo run --release --example monte_carlo_sweep
//! cargo run --release --example counterexamples
//! cargo run --release --example logistic_experiment
//! ```

pub mod bounds;
pub mod cli;
pub mod conditions;
pub mod error;
pub mod learning;
pub mod mc;
pub mod mi;
pub mod models;
pub mod rng;
pub mod special;

pub use error::{Error, Result};
pub use learning::{LearningTuple, ModelId, ModelParams};
pub use rng::RngStream;
