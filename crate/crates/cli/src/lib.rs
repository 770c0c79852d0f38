//! Library side of the `rankgrad` tool: argument parsing, the coset table
//! cache, command execution and report rendering. `main.rs` only wires these
//! together so the pieces can be tested directly.

pub mod cache;
pub mod commands;
pub mod config;
pub mod error;
pub mod render;

use config::{Cli, RunConfig};
use error::CliError;

/// Run one command. Returns the rendered report and the exit status, or
/// an error when no report could be produced.
pub fn run(cli: &Cli) -> Result<(String, i32), CliError> {
    let config = RunConfig::from_cli(cli);
    config.check().map_err(CliError::Parse)?;
    let out = commands::execute(cli)?;
    let status = out.failure.as_ref().map_or(0, CliError::exit_code);
    Ok((render::render(&config, &out), status))
}
