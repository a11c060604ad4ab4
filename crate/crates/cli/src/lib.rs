//! Command-line front end: configuration, subcommands and report rendering.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::commands::CommandOutput;
use crate::config::{ConfigError, Flags, RunConfig};

/// Directory prepended to relative `--out` paths when set.
pub const OUT_DIR_ENV: &str = "ENTROPIC_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "entropic", version, about = "Entropic speed, rate and efficiency of driven two-level evolutions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Integrate the propagator and compare with the closed-form transition probability.
    Simulate(Flags),
    /// Closed-form and finite-difference Fisher information over a theta grid.
    Fisher(Flags),
    /// Closed-form vs numeric geodesic with speed, length and divergence.
    Geodesic(Flags),
    /// Speed, rate and efficiency of the four scenarios.
    Report(Flags),
    /// Grid of the region where the exponential drive outruns the power-law drive.
    Region(Flags),
    /// Transverse and longitudinal field components over time.
    Fields(Flags),
}

impl Command {
    pub fn flags(&self) -> &Flags {
        match self {
            Command::Simulate(f)
            | Command::Fisher(f)
            | Command::Geodesic(f)
            | Command::Report(f)
            | Command::Region(f)
            | Command::Fields(f) => f,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Numeric(#[from] entropic_core::Error),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) | CliError::Write { .. } => 1,
        }
    }
}

pub fn execute(command: &Command, config: &RunConfig) -> Result<CommandOutput, CliError> {
    let out = match command {
        Command::Simulate(_) => commands::cmd_simulate(config)?,
        Command::Fisher(_) => commands::cmd_fisher(config)?,
        Command::Geodesic(_) => commands::cmd_geodesic(config)?,
        Command::Report(_) => commands::cmd_report(config)?,
        Command::Region(_) => commands::cmd_region(config)?,
        Command::Fields(_) => commands::cmd_fields(config)?,
    };
    Ok(out)
}

/// Resolve, execute and emit. Returns the process exit code.
pub fn run(cli: &Cli) -> Result<u8, CliError> {
    let config = RunConfig::resolve(cli.command.flags())?;
    let output = execute(&cli.command, &config)?;
    let rendered = output.table.render(config.format, config.precision);
    match &config.out {
        Some(path) => {
            let path = match std::env::var_os(OUT_DIR_ENV) {
                Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                _ => path.clone(),
            };
            std::fs::write(&path, rendered).map_err(|source| CliError::Write { path, source })?;
        }
        None => print!("{rendered}"),
    }
    Ok(if output.passed { 0 } else { 1 })
}
