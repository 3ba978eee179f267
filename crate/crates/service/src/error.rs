use aap_core::Error as CoreError;
use aap_store::StoreError;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::{Deserialize, Serialize};

/// Body of every non-2xx response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApiError {
    pub code: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_path: Option<String>,
}

#[derive(Debug)]
pub struct ApiFailure {
    pub status: StatusCode,
    pub body: ApiError,
}

impl ApiFailure {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        ApiFailure {
            status,
            body: ApiError {
                code: code.to_string(),
                message: message.into(),
                field_path: None,
            },
        }
    }

    pub fn at(mut self, field_path: Option<&str>) -> Self {
        self.body.field_path = field_path.filter(|p| !p.is_empty()).map(str::to_string);
        self
    }

    pub fn malformed(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "malformed", message)
    }
}

impl From<CoreError> for ApiFailure {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::RangeViolation { .. } => "range_violation",
            CoreError::InstrumentInvalid { .. }
            | CoreError::EmptyInventory(_)
            | CoreError::DegenerateInput(_) => "instrument_invalid",
            CoreError::UnknownIndexName(_) | CoreError::InvalidConfig(_) => "malformed",
        };
        ApiFailure::new(StatusCode::BAD_REQUEST, code, e.to_string()).at(e.field_path())
    }
}

impl From<StoreError> for ApiFailure {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::Instrument(inner) => inner.into(),
            StoreError::NotFound(_) => {
                ApiFailure::new(StatusCode::NOT_FOUND, "not_found", e.to_string())
            }
            StoreError::RevisionConflict { .. } => {
                ApiFailure::new(StatusCode::CONFLICT, "revision_conflict", e.to_string())
            }
            StoreError::InvalidRequest(_) => ApiFailure::malformed(e.to_string()),
            StoreError::EmptyHistory => {
                ApiFailure::new(StatusCode::BAD_REQUEST, "instrument_invalid", e.to_string())
            }
            StoreError::InvariantViolation { ref path, .. } => {
                let path = path.clone();
                ApiFailure::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string())
                    .at(Some(&path))
            }
            StoreError::SchemaVersionMismatch { .. }
            | StoreError::MalformedDocument(_)
            | StoreError::Io { .. } => {
                ApiFailure::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string())
            }
        }
    }
}

impl IntoResponse for ApiFailure {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}
