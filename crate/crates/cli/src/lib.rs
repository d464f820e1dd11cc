//! Scenario runner for `gqd-core`.
//!
//! A scenario is a JSON file naming a `kind`, its `params`, and optional
//! `seed` and `tolerances`. Running it produces a [`Report`] listing every
//! residual next to the bound it was checked against.

pub mod app;
pub mod diff;
pub mod error;
pub mod kinds;
pub mod report;
pub mod scenario;

pub use diff::{diff_reports, DiffKind, DiffOptions, ReportDiff};
pub use error::{CliError, Result, EXIT_ASSERTION, EXIT_IO, EXIT_PASS, EXIT_SCHEMA};
pub use report::{Check, Relation, Report};
pub use scenario::{
    context, run_scenario, run_scenario_file, Context, Kind, Overrides, Scenario, ToleranceOverrides,
    SEED_ENV,
};
