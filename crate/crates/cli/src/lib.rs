//! Flag handling, report assembly and exit codes for the `waldschmidt`
//! binary.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 internal failure
//! (engine error, broken theorem check, MISMATCH against a closed form, I/O),
//! 3 Demailly violation. When both 2 and 3 apply, 2 wins.

pub mod args;
mod commands;
mod scan;

use std::ffi::OsString;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::Parser;
use thiserror::Error;
use waldschmidt_core::analysis::AnalysisError;
use waldschmidt_core::configs::ConfigError;
use waldschmidt_core::interpolation::InterpolationError;

pub use args::{Cli, Command, Format};
pub use commands::{AlphaReport, Outcome};
pub use scan::{ScanReport, ScanSummary, ScanTrial, Violation};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INTERNAL: u8 = 2;
pub const EXIT_VIOLATION: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: ConfigError },
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_)
            | CliError::Input { .. }
            | CliError::Read { .. }
            | CliError::Config(_) => EXIT_USAGE,
            // a request past the degree or multiplicity caps is the caller's to fix
            CliError::Analysis(AnalysisError::Interpolation(
                InterpolationError::DegreeCap { .. } | InterpolationError::MultiplicityCap { .. },
            )) => EXIT_USAGE,
            CliError::Analysis(_) | CliError::Write { .. } => EXIT_INTERNAL,
        }
    }
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first), runs the command and writes the
/// report to `--output` if given. Panics are caught and reported as exit 2.
pub fn invoke<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == EXIT_OK {
                (text, String::new())
            } else {
                (String::new(), text)
            };
            return Invocation {
                code,
                stdout,
                stderr,
            };
        }
    };
    let result = panic::catch_unwind(AssertUnwindSafe(|| commands::run(&cli)));
    match result {
        Ok(Ok(outcome)) => match write_outcome(&outcome) {
            Ok(stdout) => Invocation {
                code: outcome.code,
                stdout,
                stderr: outcome.notes.join(""),
            },
            Err(e) => Invocation {
                code: e.exit_code(),
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            },
        },
        Ok(Err(e)) => Invocation {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            Invocation {
                code: EXIT_INTERNAL,
                stdout: String::new(),
                stderr: format!("internal error: {msg}\n"),
            }
        }
    }
}

fn write_outcome(o: &Outcome) -> Result<String, CliError> {
    for (path, text) in &o.files {
        std::fs::write(path, text).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?;
    }
    match &o.output {
        Some(path) => {
            std::fs::write(path, &o.report).map_err(|source| CliError::Write {
                path: path.clone(),
                source,
            })?;
            Ok(String::new())
        }
        None => Ok(o.report.clone()),
    }
}
