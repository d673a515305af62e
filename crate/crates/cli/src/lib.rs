//! Config ingestion, the exact / perturbative / closed-form pipelines,
//! comparisons and switching-frequency sweeps, written as CSV.

pub mod commands;
pub mod config;
mod error;
pub mod output;

pub use commands::{cmd_compare, cmd_exact, cmd_perturb, cmd_sweep, Report, Summary};
pub use config::{Overrides, RawConfig, Run, RunConfig, Switch};
pub use error::{CliError, Result};
pub use output::Table;
