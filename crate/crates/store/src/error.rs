use std::io;

use thiserror::Error;

pub type Result<T, E = StoreError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("schema version {found} is not supported (expected {expected})")]
    SchemaVersionMismatch { found: i64, expected: u32 },

    #[error("malformed document: {0}")]
    MalformedDocument(String),

    #[error("invariant violated at {path}: {detail}")]
    InvariantViolation { path: String, detail: String },

    #[error("revision conflict: caller has {supplied}, store has {current}")]
    RevisionConflict { supplied: u64, current: u64 },

    #[error(transparent)]
    Instrument(#[from] aap_core::Error),

    #[error("project has no iterations")]
    EmptyHistory,

    #[error("project `{0}` not found")]
    NotFound(String),

    #[error("invalid request: {0}")]
    InvalidRequest(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

impl StoreError {
    pub(crate) fn io(context: impl Into<String>, source: io::Error) -> Self {
        StoreError::Io {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn invariant(path: impl Into<String>, detail: impl Into<String>) -> Self {
        StoreError::InvariantViolation {
            path: path.into(),
            detail: detail.into(),
        }
    }
}
