//! `tricomi`: evaluation, field export, identity checks and weak-form
//! verification of Tricomi fundamental solutions.

mod commands;
mod config;

use clap::Parser;
use thiserror::Error;

use config::{Command, Flags, RunConfig};

/// Exit code of a run whose checks all passed.
pub const EXIT_OK: i32 = 0;
/// Exit code of a failed check or evaluation.
pub const EXIT_FAILED: i32 = 1;
/// Exit code of a malformed invocation.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{0}")]
pub struct UsageError(pub String);

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(#[from] UsageError),
    #[error("{0}")]
    Core(#[from] tricomi::error::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(_) | CliError::Io(_) => EXIT_FAILED,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "tricomi", version, about = "Fundamental solutions of the generalized Tricomi operator")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(clap::Subcommand, Debug)]
enum Sub {
    /// Kernel value at one point.
    Eval(Flags),
    /// Kernel values on a grid, written as CSV.
    Field(Flags),
    /// Constants and identity residuals per dimension.
    Identities(Flags),
    /// Weak-form checks of the fundamental-solution property.
    Verify(Flags),
    /// Identities plus the n = 1 weak-form checks.
    Selftest(Flags),
}

fn main() {
    let cli = Cli::parse();
    let (command, flags) = match cli.command {
        Sub::Eval(f) => (Command::Eval, f),
        Sub::Field(f) => (Command::Field, f),
        Sub::Identities(f) => (Command::Identities, f),
        Sub::Verify(f) => (Command::Verify, f),
        Sub::Selftest(f) => (Command::Selftest, f),
    };
    let code = match RunConfig::resolve(command, &flags)
        .map_err(CliError::from)
        .and_then(|cfg| commands::run(&cfg, &mut std::io::stdout().lock()))
    {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
