//! Library half of the `mimpeak` command: spectrum file parsing, experiment
//! configs and manifests, results tables, and the built-in self-check.

pub mod commands;
pub mod config;
pub mod error;
pub mod input;
pub mod report;
pub mod selfcheck;

pub use error::{CliError, Result};
