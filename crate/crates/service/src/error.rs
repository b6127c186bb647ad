use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error("unknown session {0:?}")]
    NotFound(String),

    #[error("{message}")]
    Conflict { message: String, current_revision: u64 },

    #[error("{0}")]
    BadRequest(String),

    #[error(transparent)]
    Core(#[from] maintsched_core::Error),

    #[error("event log: {0}")]
    Io(#[from] std::io::Error),
}

impl ServiceError {
    pub fn status(&self) -> StatusCode {
        use maintsched_core::Error as E;
        match self {
            ServiceError::NotFound(_) | ServiceError::Core(E::UnknownFixture(_)) => StatusCode::NOT_FOUND,
            ServiceError::Conflict { .. } => StatusCode::CONFLICT,
            ServiceError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ServiceError::Core(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ServiceError::NotFound(_) => "not_found",
            ServiceError::Conflict { .. } => "conflict",
            ServiceError::BadRequest(_) => "bad_request",
            ServiceError::Core(e) => e.kind(),
            ServiceError::Io(_) => "io",
        }
    }
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let mut body = json!({ "kind": self.kind(), "message": self.to_string() });
        match &self {
            ServiceError::Core(maintsched_core::Error::Validation { path, message }) => {
                body["path"] = json!(path);
                body["message"] = json!(message);
            }
            ServiceError::Core(maintsched_core::Error::Parse { line, column, .. }) => {
                body["line"] = json!(line);
                body["column"] = json!(column);
            }
            ServiceError::Conflict { current_revision, .. } => body["current_revision"] = json!(current_revision),
            _ => {}
        }
        if self.status().is_server_error() {
            tracing::error!(error = %self, "request failed");
        }
        (self.status(), Json(json!({ "error": body }))).into_response()
    }
}

pub type ServiceResult<T> = Result<T, ServiceError>;
