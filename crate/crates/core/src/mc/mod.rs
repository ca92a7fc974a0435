//! Monte-Carlo sweeps, rate fits, example reproductions and acceptance checks.

mod criteria;
mod fit;
mod reproduce;
mod sweep;
mod table;

pub use criteria::{run_criterion, CriterionOutcome, ReproOptions, Verdict, CRITERIA};
pub use fit::{fit_linear, fit_rate, LinearFit, RateFit};
pub use reproduce::{reproduce_example, ExampleId, ReportBundle};
pub use sweep::{
    run_sweep, BoundValues, EstimatorSettings, MeanStderr, OutputFlags, SweepConfig, SweepResult, SweepRow,
    NONCONVERGENCE_LIMIT,
};
pub use table::{format_g9, Cell, Table};
