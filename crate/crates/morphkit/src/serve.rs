//! Local HTTP service for the lexicon wizard.
//!
//! Reads share the lexicon; commits take the write lock one at a time.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use morphkit_core::lexicon::{next_question, LexiconError, QuestionTree, Step, TreeError};
use morphkit_core::tagset::Pos;
use serde::Deserialize;

use crate::payload::{self, AnswerRequest, CommitPayload, CommitRequest, QuestionPayload, SessionPayload, StepPayload};
use crate::pipeline::Pipeline;

pub struct AppState {
    pipeline: RwLock<Pipeline>,
    tree: QuestionTree,
    sessions: Mutex<Sessions>,
    persist_to: Option<PathBuf>,
}

#[derive(Default)]
struct Sessions {
    next: u64,
    live: BTreeMap<String, Vec<String>>,
}

impl AppState {
    /// Commits are written to `persist_to` when it is set.
    pub fn new(pipeline: Pipeline, tree: QuestionTree, persist_to: Option<PathBuf>) -> Self {
        Self {
            pipeline: RwLock::new(pipeline),
            tree,
            sessions: Mutex::new(Sessions::default()),
            persist_to,
        }
    }
}

fn json_body(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn error(status: StatusCode, message: impl ToString) -> Response {
    json_body(status, payload::error_json(message))
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/lexicon/session", post(create_session))
        .route("/lexicon/session/{id}/answer", post(answer))
        .route("/lexicon/session/{id}/commit", post(commit))
        .route("/analyze", get(analyze))
        .route("/generate", get(generate))
        .with_state(state)
}

async fn create_session(State(state): State<Arc<AppState>>) -> Response {
    let mut sessions = state.sessions.lock().expect("session lock");
    sessions.next += 1;
    let id = sessions.next.to_string();
    sessions.live.insert(id.clone(), Vec::new());
    let body = payload::json(&SessionPayload {
        session_id: id,
        question: QuestionPayload::from(state.tree.root()),
    });
    json_body(StatusCode::CREATED, body)
}

async fn answer(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(req): Json<AnswerRequest>,
) -> Response {
    let mut sessions = state.sessions.lock().expect("session lock");
    let Some(history) = sessions.live.get_mut(&id) else {
        return error(StatusCode::NOT_FOUND, format!("no session {id}"));
    };
    let mut next = history.clone();
    next.push(req.key);
    match next_question(&state.tree, &next) {
        Ok(step) => {
            *history = next;
            let body = match step {
                Step::Ask(q) => StepPayload::Question(q.into()),
                Step::Inferred(s) => StepPayload::Inferred(s.into()),
            };
            json_body(StatusCode::OK, payload::json(&body))
        }
        Err(e @ TreeError::InvalidAnswer { .. }) => error(StatusCode::UNPROCESSABLE_ENTITY, e),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e),
    }
}

async fn commit(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(req): Json<CommitRequest>,
) -> Response {
    let mut sessions = state.sessions.lock().expect("session lock");
    let Some(history) = sessions.live.get(&id) else {
        return error(StatusCode::NOT_FOUND, format!("no session {id}"));
    };
    let skeleton = match next_question(&state.tree, history) {
        Ok(Step::Inferred(s)) => s.clone(),
        Ok(Step::Ask(q)) => {
            return error(
                StatusCode::UNPROCESSABLE_ENTITY,
                format!("question `{}` is still open", q.id),
            );
        }
        Err(e) => return error(StatusCode::INTERNAL_SERVER_ERROR, e),
    };
    let mut entry = skeleton.entry(&req.lemma);
    entry.alternants = req.alternants;
    entry.separable_prefix = req.prefix.filter(|p| !p.is_empty());
    entry.gloss = req.gloss.filter(|g| !g.is_empty());

    let mut pipeline = state.pipeline.write().expect("lexicon lock");
    let mut updated = pipeline.lexicon.clone();
    let id_added = match updated.add_stem(entry) {
        Ok(entry_id) => entry_id,
        Err(e @ LexiconError::DuplicateEntry { .. }) => return error(StatusCode::CONFLICT, e),
        Err(e) => return error(StatusCode::UNPROCESSABLE_ENTITY, e),
    };
    if let Some(path) = &state.persist_to {
        if let Err(e) = std::fs::write(path, updated.render()) {
            return error(StatusCode::INTERNAL_SERVER_ERROR, format!("cannot save lexicon: {e}"));
        }
    }
    pipeline.lexicon = updated;
    sessions.live.remove(&id);
    json_body(
        StatusCode::CREATED,
        payload::json(&CommitPayload { entry_id: id_added.0 }),
    )
}

#[derive(Deserialize)]
struct AnalyzeQuery {
    form: String,
}

async fn analyze(State(state): State<Arc<AppState>>, Query(q): Query<AnalyzeQuery>) -> Response {
    let pipeline = state.pipeline.read().expect("lexicon lock");
    match pipeline.analyze(&q.form) {
        Ok(analyses) => json_body(StatusCode::OK, payload::analyses_json(&analyses)),
        Err(e) => error(StatusCode::UNPROCESSABLE_ENTITY, e),
    }
}

#[derive(Deserialize)]
struct GenerateQuery {
    lemma: String,
    pos: Option<String>,
}

async fn generate(State(state): State<Arc<AppState>>, Query(q): Query<GenerateQuery>) -> Response {
    let pos = match q.pos.as_deref().filter(|p| !p.is_empty()) {
        None => None,
        Some(code) => match Pos::from_code(code) {
            Some(p) => Some(p),
            None => {
                return error(
                    StatusCode::UNPROCESSABLE_ENTITY,
                    format!("unknown part of speech `{code}`"),
                )
            }
        },
    };
    let pipeline = state.pipeline.read().expect("lexicon lock");
    match pipeline.generate(&q.lemma, pos) {
        Ok(forms) => json_body(StatusCode::OK, payload::forms_json(&forms)),
        Err(e) => error(StatusCode::NOT_FOUND, e),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error("port in use: {0}")]
    PortInUse(SocketAddr),
    #[error("refusing to listen on non-loopback address {0}")]
    NotLoopback(SocketAddr),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Binds `addr` and serves until the process ends.
pub async fn serve(state: Arc<AppState>, addr: SocketAddr, allow_remote: bool) -> Result<(), ServeError> {
    if !addr.ip().is_loopback() && !allow_remote {
        return Err(ServeError::NotLoopback(addr));
    }
    let listener = tokio::net::TcpListener::bind(addr).await.map_err(|e| match e.kind() {
        std::io::ErrorKind::AddrInUse => ServeError::PortInUse(addr),
        _ => ServeError::Io(e),
    })?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state)).await?;
    Ok(())
}
