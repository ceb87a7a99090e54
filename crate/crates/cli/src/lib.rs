//! Command-line driver: TOML configuration in, CSV tables and SVG plots out.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod plot;

pub use commands::{cmd_solve, cmd_sweep, cmd_verify};
pub use config::{Overrides, RunConfig};
pub use error::CliError;
