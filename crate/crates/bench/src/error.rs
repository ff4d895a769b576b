use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, BenchError>;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{origin}: line {line}: {message}")]
    ConfigLine {
        origin: String,
        line: usize,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: line {line}: {message}")]
    Schema {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("no monolithic timing: T(1, n) is needed to derive any efficiency")]
    MissingMonolithic,

    #[error("results mix problem sizes {0} and {1}")]
    MixedSizes(usize, usize),

    #[error("refusing to emit an empty report")]
    EmptyReport,

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Solver(#[from] ddm_core::Error),
}
