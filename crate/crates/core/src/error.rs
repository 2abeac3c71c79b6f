use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An input falls outside the domain of a formula (e.g. `r <= 0`).
    #[error("domain error: {0}")]
    Domain(String),

    /// A quantity diverges (e.g. the repetition count for a zero phase).
    #[error("divergence: {0}")]
    Divergence(String),

    /// The ODE solver could not meet its tolerance within the step budget.
    #[error("numerical failure at t = {t}: {reason} (steps = {steps}, h = {step_size:e})")]
    Numerical {
        reason: String,
        t: f64,
        steps: usize,
        step_size: f64,
    },

    /// A delay-time fit could not be carried out on the trajectory.
    #[error("fit failure: {0}")]
    Fit(String),

    /// A sweep had too many cells that failed to evaluate.
    #[error("sweep failure: {invalid} of {total} cells invalid")]
    Sweep { invalid: usize, total: usize },

    /// Every problem found in a configuration file or on the command line.
    #[error("{}", format_issues(.0))]
    Config(Vec<ConfigIssue>),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

/// One configuration problem. Line 0 means "not tied to a line" (a default
/// value or a command-line flag).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigIssue {
    pub line: usize,
    pub msg: String,
}

impl ConfigIssue {
    pub fn new(line: usize, msg: impl Into<String>) -> Self {
        ConfigIssue { line, msg: msg.into() }
    }
}

fn format_issues(issues: &[ConfigIssue]) -> String {
    issues
        .iter()
        .map(|i| match i.line {
            0 => format!("config error: {}", i.msg),
            n => format!("config error at line {n}: {}", i.msg),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(line: usize, msg: impl Into<String>) -> Self {
        Error::Config(vec![ConfigIssue::new(line, msg)])
    }

    /// Process exit code: 2 for numerical trouble, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numerical { .. } | Error::Fit(_) | Error::Sweep { .. } | Error::Divergence(_) => 2,
            Error::Domain(_) | Error::Config(_) | Error::Io { .. } => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
