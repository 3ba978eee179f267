use std::process::ExitCode;

use aap_store::StoreError;
use thiserror::Error;

/// Exit statuses of the `aap` binary.
pub mod exit {
    pub const GATE_OPEN: u8 = 0;
    pub const GATE_CLOSED: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const STORE: u8 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Validation(#[from] aap_core::Error),

    #[error(transparent)]
    Store(StoreError),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) | CliError::Validation(_) => exit::USAGE,
            CliError::Store(_) | CliError::Io { .. } => exit::STORE,
        })
    }
}

impl From<StoreError> for CliError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::Instrument(inner) => CliError::Validation(inner),
            StoreError::EmptyHistory | StoreError::InvalidRequest(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Store(other),
        }
    }
}
