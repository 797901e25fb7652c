//! Command-line front end for `lipsat-core`: configuration, JSON and CSV
//! reports, and replay of recorded witnesses.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod json;

pub use cli::Cli;
pub use commands::{run, Output};
pub use error::{exit, CliError, CliResult};
