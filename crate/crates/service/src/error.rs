use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use polycut_core::combinatorics::LabError;
use polycut_core::probability::ProbabilityError;
use polycut_core::{CutSegment, DissectionError, PolyominoError};
use serde::Serialize;

/// Error body: `{"error": code, "detail": text, "legal_cuts": [...]}`.
#[derive(Debug, Clone, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub error: &'static str,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub legal_cuts: Option<Vec<CutSegment>>,
}

impl ApiError {
    pub fn new(status: StatusCode, error: &'static str, detail: impl Into<String>) -> Self {
        ApiError { status, error, detail: detail.into(), legal_cuts: None }
    }

    pub fn bad_request(detail: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", detail)
    }

    pub fn not_found(what: &str, id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", format!("no {what} session {id:?}"))
    }

    pub fn conflict(error: &'static str, detail: impl Into<String>) -> Self {
        Self::new(StatusCode::CONFLICT, error, detail)
    }

    pub fn with_legal_cuts(mut self, cuts: Vec<CutSegment>) -> Self {
        self.legal_cuts = Some(cuts);
        self
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}

impl From<PolyominoError> for ApiError {
    fn from(e: PolyominoError) -> Self {
        match e {
            PolyominoError::CapExceeded { .. } => Self::new(StatusCode::UNPROCESSABLE_ENTITY, "cap_exceeded", e.to_string()),
            _ => Self::new(StatusCode::BAD_REQUEST, "invalid_polyomino", e.to_string()),
        }
    }
}

impl From<DissectionError> for ApiError {
    fn from(e: DissectionError) -> Self {
        match e {
            DissectionError::CapExceeded { .. } => {
                Self::new(StatusCode::UNPROCESSABLE_ENTITY, "cap_exceeded", e.to_string())
            }
            DissectionError::IllegalCut(_) | DissectionError::WrongModel { .. } => {
                Self::conflict("illegal_cut", e.to_string())
            }
            DissectionError::Overlap(_) => Self::bad_request(e.to_string()),
            DissectionError::Polyomino(inner) => inner.into(),
        }
    }
}

impl From<LabError> for ApiError {
    fn from(e: LabError) -> Self {
        match e {
            LabError::CapExceeded { .. } => Self::new(StatusCode::UNPROCESSABLE_ENTITY, "cap_exceeded", e.to_string()),
            _ => Self::bad_request(e.to_string()),
        }
    }
}

impl From<ProbabilityError> for ApiError {
    fn from(e: ProbabilityError) -> Self {
        Self::bad_request(e.to_string())
    }
}
