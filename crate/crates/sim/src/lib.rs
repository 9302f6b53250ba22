//! Configuration, file formats and subcommands of the `collapse-sim` tool.

pub mod commands;
pub mod config;
pub mod csvio;
mod error;

pub use error::CliError;
