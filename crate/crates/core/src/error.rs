use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by rule construction, power computation, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration: bad quota, missing weight, duplicate id, ...
    #[error("configuration error: {0}")]
    Config(String),

    /// The council is too large for the requested exact backend.
    #[error("capacity error: {n} members exceeds the {backend} limit of {max}; {hint}")]
    Capacity {
        n: usize,
        max: usize,
        backend: &'static str,
        hint: &'static str,
    },

    /// The rule cannot be handled by the subset-sum DP backend.
    #[error("dp dispatch error: {0}")]
    DpIneligible(String),

    /// A report and an ideal distribution cover different member sets.
    #[error("member set mismatch: {0}")]
    MemberMismatch(String),

    /// No sweep row satisfies the requested efficiency floor.
    #[error("no quota tuple reaches the efficiency floor {floor_percent}%")]
    NoFeasibleTuple { floor_percent: String },

    /// An empty sweep result cannot be optimized.
    #[error("empty sweep result")]
    EmptySweep,

    /// Dataset parse failure with source location.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// I/O failure with path context.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
