use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::IntoResponse;
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;

use maintsched_core::scenario::{load_fixture_named, parse_json, TaskDoc};
use maintsched_core::InsertionPolicy;

use crate::error::{ServiceError, ServiceResult};
use crate::session::{Mutation, Submission};
use crate::store::SessionStore;
use crate::views::{CostsView, InsertionView, Mode, ScheduleView, SessionSummary, WindowsView};

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/health", get(|| async { "ok" }))
        .route("/sessions", post(create_session).get(list_sessions))
        .route("/sessions/{id}", get(session_summary))
        .route("/sessions/{id}/schedule", get(schedule))
        .route("/sessions/{id}/windows", get(windows))
        .route("/sessions/{id}/costs", get(costs))
        .route("/sessions/{id}/tasks", post(post_task))
        .route("/sessions/{id}/undo", post(undo))
        .with_state(store)
}

fn parse_body<T: serde::de::DeserializeOwned>(body: &str) -> ServiceResult<T> {
    serde_json::from_str(body).map_err(|e| ServiceError::Core(e.into()))
}

fn parse_policy(text: Option<&str>) -> ServiceResult<Option<InsertionPolicy>> {
    text.map(str::parse).transpose().map_err(ServiceError::Core)
}

#[derive(Debug, Deserialize)]
struct CreateQuery {
    policy: Option<String>,
    /// Start from a bundled fixture instead of a request body.
    fixture: Option<String>,
}

/// Body: a scenario document. The session policy is, in order, the
/// `policy` query parameter, the document's own `policy`, the server
/// default.
async fn create_session(
    State(store): State<Arc<SessionStore>>,
    Query(q): Query<CreateQuery>,
    body: String,
) -> ServiceResult<impl IntoResponse> {
    let mut policy = parse_policy(q.policy.as_deref())?;
    let scenario = match (&q.fixture, body.trim().is_empty()) {
        (Some(name), true) => load_fixture_named(name)?.scenario,
        (Some(_), false) => {
            return Err(ServiceError::BadRequest("give either a fixture or a scenario body, not both".into()))
        }
        (None, true) => return Err(ServiceError::BadRequest("missing scenario body".into())),
        (None, false) => {
            let scenario = parse_json(&body)?;
            let explicit = serde_json::from_str::<serde_json::Value>(&body)
                .ok()
                .is_some_and(|v| v.get("policy").is_some());
            if policy.is_none() && explicit {
                policy = Some(scenario.policy);
            }
            scenario
        }
    };
    let summary = store.create(scenario, policy, SessionSummary::new)?;
    Ok((StatusCode::CREATED, Json(summary)))
}

async fn list_sessions(State(store): State<Arc<SessionStore>>) -> Json<Vec<String>> {
    Json(store.ids())
}

async fn session_summary(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
) -> ServiceResult<Json<SessionSummary>> {
    store.read(&id, SessionSummary::new).map(Json)
}

async fn schedule(State(store): State<Arc<SessionStore>>, Path(id): Path<String>) -> ServiceResult<Json<ScheduleView>> {
    store.read(&id, ScheduleView::new).map(Json)
}

async fn windows(State(store): State<Arc<SessionStore>>, Path(id): Path<String>) -> ServiceResult<Json<WindowsView>> {
    store.read(&id, WindowsView::new).map(Json)
}

async fn costs(State(store): State<Arc<SessionStore>>, Path(id): Path<String>) -> ServiceResult<Json<CostsView>> {
    store.read(&id, CostsView::new).map(Json)
}

#[derive(Debug, Deserialize)]
struct TaskQuery {
    mode: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TaskRequest {
    task: TaskDoc,
    #[serde(default)]
    policy: Option<InsertionPolicy>,
    #[serde(default)]
    start: Option<String>,
    /// Required revision for a commit; omitted means "whatever is current".
    #[serde(default)]
    expected_revision: Option<u64>,
}

async fn post_task(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
    Query(q): Query<TaskQuery>,
    body: String,
) -> ServiceResult<Json<InsertionView>> {
    let mode = match q.mode.as_deref() {
        None | Some("preview") => Mode::Preview,
        Some("commit") => Mode::Commit,
        Some(other) => {
            return Err(ServiceError::BadRequest(format!("unknown mode {other:?} (expected preview or commit)")))
        }
    };
    let req: TaskRequest = parse_body(&body)?;
    let sub = Submission {
        task: req.task,
        policy: req.policy,
        start: req.start,
    };
    let view = match mode {
        Mode::Preview => store.read(&id, |s| {
            s.preview(&sub).map(|o| InsertionView::new(s, Mode::Preview, &o))
        })??,
        Mode::Commit => store.mutate(&id, Mutation::Commit(sub), req.expected_revision, |s, o| {
            InsertionView::new(s, Mode::Commit, o.expect("commit yields an outcome"))
        })?,
    };
    Ok(Json(view))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct UndoRequest {
    #[serde(default)]
    expected_revision: Option<u64>,
}

async fn undo(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
    body: String,
) -> ServiceResult<Json<SessionSummary>> {
    let req: UndoRequest = if body.trim().is_empty() {
        UndoRequest::default()
    } else {
        parse_body(&body)?
    };
    store
        .mutate(&id, Mutation::Undo, req.expected_revision, |s, _| SessionSummary::new(s))
        .map(Json)
}
