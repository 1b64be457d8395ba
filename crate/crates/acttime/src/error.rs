//! Error types shared across the toolkit.

use std::path::PathBuf;

/// Errors produced by the simulator, countermeasure, and analysis code.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input to a mathematical operation was outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A profile violated its own structural invariants (e.g. an input
    /// fell into no cluster region).
    #[error("profile integrity error: {0}")]
    ProfileIntegrity(String),

    /// A configuration value or descriptor was invalid.
    #[error("configuration error: {0}")]
    Config(String),

    /// A precondition on the data was violated (too few samples,
    /// already-protected trace, and so on).
    #[error("data error: {0}")]
    Data(String),

    /// Calibration input had no timing variation to hide.
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// The delay distribution could not produce a non-negative sample
    /// within the redraw cap.
    #[error("delay distribution misconfigured: {0}")]
    DistributionMisconfigured(String),

    /// Applying the countermeasure to an already-protected trace.
    #[error("trace is already protected; delays must not compound")]
    AlreadyProtected,

    /// File system failure with the path that caused it.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A persisted document failed to parse.
    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the CLI: 2 config, 3 data/precondition, 4 i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Parse { .. } => 2,
            Error::Io { .. } => 4,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
