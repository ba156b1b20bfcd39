use thiserror::Error;

use crate::Model;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid sampler spec: {0}")]
    InvalidSpec(String),

    #[error("{op}: {reason}")]
    OutOfRange { op: &'static str, reason: String },

    #[error(
        "sequence is not a legal dimer configuration (equal-neighbour set meets both parities)"
    )]
    MixedSequence,

    #[error("model {0} is not supported by {1}")]
    UnsupportedModel(Model, &'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("metadata mismatch on `{field}`: expected {expected}, found {found}")]
    MetadataMismatch {
        field: String,
        expected: String,
        found: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn range(op: &'static str, reason: impl Into<String>) -> Self {
        Error::OutOfRange {
            op,
            reason: reason.into(),
        }
    }
}
