use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("width mismatch: expected {expected} bits, got {actual}")]
    WidthMismatch { expected: usize, actual: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("truth table over {arity} inputs must have {expected} entries, got {actual}")]
    MalformedTable {
        arity: usize,
        expected: usize,
        actual: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    /// The greedy lexicode produced a parity that does not fit a machine word.
    #[error("greedy parity for message {message:#x} exceeds 64 bits")]
    ParityOverflow { message: u64 },

    #[error("greedy code is not linear: parity({a:#x}) ^ parity({b:#x}) != parity({a:#x} ^ {b:#x})")]
    NonLinearLexicode { a: u64, b: u64 },

    #[error("solver process failed on combination {combination}: {reason}")]
    Solver { combination: String, reason: String },

    #[error("solver timed out after {seconds}s on combination {combination}")]
    SolverTimeout { combination: String, seconds: u64 },

    #[error("could not parse solver model: {0}")]
    Model(String),

    #[error("invalid netlist: {0}")]
    InvalidNetlist(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
