//! Command-line front end for Boo(n) reporting: pool ingestion, JSON reports
//! and curve CSVs on top of `boon-core`.

pub mod args;
pub mod commands;
pub mod error;
pub mod input;
pub mod report;

pub use args::Cli;
pub use commands::{run, write_outputs, Output};
pub use error::{exit, CliError};
