//! `pseudoherm`: run the identity checks, dump spectra, or sweep the
//! deformation parameter.
//!
//! Exit codes: 0 when every check passes, 1 when at least one fails, 2 for
//! usage, configuration and I/O errors.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::JobArgs;

#[derive(Parser, Debug)]
#[command(
    name = "pseudoherm",
    version,
    about = "Metric-operator checks for the Swanson model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the full check suite and write a JSON report.
    Verify(JobArgs),
    /// Write the lowest eigenvalues as CSV.
    Spectrum(JobArgs),
    /// Run the suite for every value of --beta-grid.
    Sweep(JobArgs),
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Verify(args) => commands::verify(&args.resolve()?),
        Command::Spectrum(args) => commands::spectrum(&args.resolve()?),
        Command::Sweep(args) => commands::sweep(&args.resolve()?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("pseudoherm: {e}");
            ExitCode::from(2)
        }
    }
}
