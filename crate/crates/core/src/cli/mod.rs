//! Configuration-driven front end: `dil <subcommand> [--config] [--out]
//! [--serial] [--seed]`.
//!
//! Exit codes: 0 pass, 1 failed check, 2 configuration error, 3 solver
//! non-convergence.

pub mod config;
pub mod report;
pub mod run;

pub use config::{ConfigError, ExperimentConfig, ENV_PREFIX};
pub use report::{Check, RunReport, Status};
pub use run::{main_with, run, Args, Command, RunError};
