//! Command-line front end: TOML scenarios in, CSV and JSON results out.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 insufficient power
//! budget, 4 unsupported scheme, 1 anything else. Failures also leave an
//! `error.json` record in the output directory.

mod app;
pub mod config;
mod error;

pub use app::{execute, main_with, Cli, Command, CommonArgs, RunManifest};
pub use error::{CliError, CliResult, ErrorRecord};
