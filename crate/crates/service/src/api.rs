use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use crate::session::{
    Answer, AnswerSource, QuestionView, Session, SessionConfig, SessionError, SessionState, StatsView,
    TranscriptEvent,
};
use crate::store::{SessionStore, StoreError};

#[derive(Debug, Deserialize)]
pub struct CreateRequest {
    pub adt_source: String,
    pub max_suggestions: Option<usize>,
}

/// `suggestion_index` counts from 1; 0 or absent means `text` is the answer,
/// and a missing `text` then stands for the empty word.
#[derive(Debug, Default, Deserialize)]
pub struct AnswerRequest {
    pub text: Option<String>,
    pub suggestion_index: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SessionView {
    pub session_id: String,
    pub state: String,
    pub question: Option<QuestionView>,
    pub message: Option<String>,
    pub examples: Vec<String>,
    pub reason: Option<String>,
    pub stats: StatsView,
}

impl SessionView {
    fn of(id: &str, s: &Session) -> Self {
        let (message, examples, reason) = match s.state() {
            SessionState::Rejected { message, examples, .. } => (Some(message.clone()), examples.clone(), None),
            SessionState::Failed { reason } => (None, Vec::new(), Some(reason.clone())),
            _ => (None, Vec::new(), None),
        };
        SessionView {
            session_id: id.to_string(),
            state: s.state().name().to_string(),
            question: s.question().cloned(),
            message,
            examples,
            reason,
            stats: s.stats(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ResultView {
    pub code: String,
    pub stats: StatsView,
    pub transcript: Vec<TranscriptEvent>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
}

pub struct ApiError(StoreError);

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        ApiError(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match &self.0 {
            StoreError::NotFound(_) => StatusCode::NOT_FOUND,
            StoreError::Busy(_) => StatusCode::CONFLICT,
            StoreError::Session(SessionError::NotAwaiting | SessionError::NotDone) => StatusCode::CONFLICT,
            StoreError::Session(SessionError::SuggestionOutOfRange { .. }) => StatusCode::BAD_REQUEST,
            StoreError::Session(_) => StatusCode::UNPROCESSABLE_ENTITY,
            StoreError::Io(_) | StoreError::Corrupt { .. } => StatusCode::INTERNAL_SERVER_ERROR,
        };
        (status, Json(ErrorBody { error: self.0.to_string() })).into_response()
    }
}

type Shared = Arc<SessionStore>;

pub fn router(store: Shared) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(show))
        .route("/sessions/{id}/answer", post(answer))
        .route("/sessions/{id}/result", get(result))
        .with_state(store)
}

/// Serves the API until the process is stopped.
pub async fn serve(store: Shared, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(store)).await
}

/// Runs blocking synthesis work off the async workers.
async fn blocking<R: Send + 'static>(
    f: impl FnOnce() -> Result<R, StoreError> + Send + 'static,
) -> Result<R, ApiError> {
    tokio::task::spawn_blocking(f).await.expect("session work does not panic").map_err(ApiError)
}

async fn create(State(store): State<Shared>, Json(req): Json<CreateRequest>) -> Result<impl IntoResponse, ApiError> {
    let config = SessionConfig {
        max_suggestions: req.max_suggestions.unwrap_or(SessionConfig::default().max_suggestions),
    };
    let view = blocking(move || {
        let id = store.create(&req.adt_source, config)?;
        store.with_session(&id, |s| Ok(SessionView::of(&id, s)))
    })
    .await?;
    Ok((StatusCode::CREATED, Json(view)))
}

async fn show(State(store): State<Shared>, Path(id): Path<String>) -> Result<Json<SessionView>, ApiError> {
    let view = store.with_session(&id, |s| Ok(SessionView::of(&id, s)))?;
    Ok(Json(view))
}

async fn answer(
    State(store): State<Shared>,
    Path(id): Path<String>,
    Json(req): Json<AnswerRequest>,
) -> Result<Json<SessionView>, ApiError> {
    let (answer, source) = match req.suggestion_index {
        Some(i) if i > 0 => (Answer::Suggestion(i), AnswerSource::SuggestionIndex),
        _ => (Answer::Text(req.text.unwrap_or_default()), AnswerSource::Human),
    };
    let view = blocking(move || {
        store.with_session(&id, |s| {
            s.submit(answer, source)?;
            Ok(SessionView::of(&id, s))
        })
    })
    .await?;
    Ok(Json(view))
}

async fn result(State(store): State<Shared>, Path(id): Path<String>) -> Result<Json<ResultView>, ApiError> {
    let view = store.with_session(&id, |s| {
        Ok(ResultView {
            code: s.code()?.to_string(),
            stats: s.stats(),
            transcript: s.transcript().to_vec(),
        })
    })?;
    Ok(Json(view))
}
