//! Command-line front end: configuration, subcommands and CSV/JSON output.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;

pub use commands::{Output, Status};
pub use config::{FileConfig, Initial, Method, Overrides, RunConfig, TimeMax};
pub use error::CliError;
