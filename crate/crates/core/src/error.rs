use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A value fell outside its permitted interval.
    #[error("{field}: value {value} is outside [{lo}, {hi}]")]
    RangeViolation {
        field: String,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// An instrument violates one of its structural invariants.
    #[error("{field}: {reason}")]
    InstrumentInvalid { field: String, reason: String },

    #[error("{0}: inventory is empty")]
    EmptyInventory(String),

    #[error("unknown index name `{0}` (expected one of PI, U, F, PRI, IU, GQ)")]
    UnknownIndexName(String),

    #[error("invalid engine configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub(crate) fn range(field: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Error::RangeViolation {
            field: field.into(),
            value,
            lo,
            hi,
        }
    }

    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InstrumentInvalid {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Dotted path of the offending field, when the error names one.
    pub fn field_path(&self) -> Option<&str> {
        match self {
            Error::RangeViolation { field, .. } | Error::InstrumentInvalid { field, .. } => {
                Some(field)
            }
            Error::EmptyInventory(field) => Some(field),
            _ => None,
        }
    }
}

/// Checks that `value` is a finite number in `[0, 1]`.
pub(crate) fn check_unit(field: impl Into<String>, value: f64) -> Result<f64> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::range(field, value, 0.0, 1.0))
    }
}
