//! HTTP/JSON service holding live dispatcher sessions.
//!
//! | method | path | |
//! |---|---|---|
//! | POST | `/sessions` | create from a scenario body (or `?fixture=tableau1`) |
//! | GET | `/sessions/{id}` | summary |
//! | GET | `/sessions/{id}/schedule` | placements, windows, assignments |
//! | GET | `/sessions/{id}/windows` | idle windows and gap rows |
//! | GET | `/sessions/{id}/costs` | cost report and gain vs baseline |
//! | POST | `/sessions/{id}/tasks?mode=preview\|commit` | insert a dynamic task |
//! | POST | `/sessions/{id}/undo` | revert the last commit |
//!
//! Commits and undos accept `expected_revision`; a stale one is answered
//! with 409. Unknown sessions give 404, invalid input 422.

mod api;
mod config;
mod error;
pub mod session;
pub mod store;
pub mod views;

use std::sync::Arc;

pub use api::router;
pub use config::ServiceConfig;
pub use error::{ServiceError, ServiceResult};
pub use session::{Mutation, Session, Submission};
pub use store::{read_log, LogEvent, SessionStore};

/// Builds the store described by `config`, replaying its event log.
pub fn open_store(config: &ServiceConfig) -> ServiceResult<SessionStore> {
    match &config.event_log {
        Some(path) => SessionStore::with_log(path, config.default_policy),
        None => Ok(SessionStore::in_memory(config.default_policy)),
    }
}

/// Serves until Ctrl-C.
pub async fn serve(config: ServiceConfig) -> std::io::Result<()> {
    let store = open_store(&config).map_err(std::io::Error::other)?;
    let listener = tokio::net::TcpListener::bind(config.listen).await?;
    tracing::info!(addr = %listener.local_addr()?, sessions = store.ids().len(), "listening");
    axum::serve(listener, router(Arc::new(store)))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
