use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: duplicate record id {id:?}")]
    DuplicateId { line: usize, id: String },

    #[error("invalid record {id:?}: {message}")]
    InvalidRecord { id: String, message: String },

    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    #[error("invalid split ratios {0:?}: must be positive and sum to 1")]
    InvalidRatios([f64; 3]),

    #[error("need at least {needed} records, got {got}")]
    TooFewRecords { needed: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("step {step} requires a {resource}, but none was configured")]
    MissingResource {
        step: &'static str,
        resource: &'static str,
    },

    #[error("unknown pipeline step {0:?} (valid steps: neg, pos, stop, stem)")]
    UnknownStep(String),

    #[error("pipeline repeats step {0}")]
    DuplicateStep(&'static str),

    #[error("all items are masked; an evidence mode needs at least one snippet")]
    AllMasked,

    #[error(
        "non-finite loss at epoch {epoch}, batch {batch} (learning rate {learning_rate}); \
         try a smaller learning rate or a larger l2 penalty"
    )]
    NonFiniteLoss {
        epoch: usize,
        batch: usize,
        learning_rate: f64,
    },

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("report: {0}")]
    Report(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
