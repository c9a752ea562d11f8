//! Command-line front end for `kasym-core`: JSON run configuration, a
//! parallel convergence sweep, and deterministic CSV/JSON reports.

pub mod cli;
pub mod config;
pub mod error;
pub mod registry;
pub mod report;
pub mod sweep;

pub use error::{CliError, CliResult};
