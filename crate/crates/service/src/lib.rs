//! HTTP JSON API over a [`SearchEngine`]: stateless search and refinement,
//! stateful chat sessions, dataset lookup and health.

pub mod sessions;

use std::collections::BTreeSet;
use std::net::SocketAddr;
use std::sync::Arc;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use axum::body::Bytes;
use axum::extract::{Path, Request, State};
use axum::http::StatusCode;
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;

use odsearch_core::dialogue::{self, BotReply, DialogueError, Event};
use odsearch_core::engine::{ConceptRef, SearchEngine, SearchResponse};
use odsearch_core::linker::{ConceptId, LinkerError};
use odsearch_core::{DatasetRecord, LanguageTag};

pub use sessions::{SessionError, SessionStore, DEFAULT_TTL_MS};

pub type Clock = Arc<dyn Fn() -> u64 + Send + Sync>;

pub fn system_clock() -> Clock {
    Arc::new(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis() as u64))
}

#[derive(Clone)]
pub struct AppState {
    pub engine: Arc<SearchEngine>,
    pub sessions: Arc<SessionStore>,
    pub clock: Clock,
}

impl AppState {
    pub fn new(engine: SearchEngine, ttl_ms: u64) -> Self {
        AppState { engine: Arc::new(engine), sessions: Arc::new(SessionStore::new(ttl_ms)), clock: system_clock() }
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError { status, code, message: message.into() }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }
}

impl From<LinkerError> for ApiError {
    fn from(e: LinkerError) -> Self {
        ApiError::new(StatusCode::SERVICE_UNAVAILABLE, "linker_unavailable", e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({"error": {"code": self.code, "message": self.message}});
        (self.status, Json(body)).into_response()
    }
}

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("malformed body: {e}")))
}

async fn blocking<T, F>(f: F) -> T
where
    F: FnOnce() -> T + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f).await.expect("blocking task panicked")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SearchRequest {
    text: String,
    #[serde(default)]
    lang: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RefineRequest {
    query_concepts: Vec<ConceptId>,
    #[serde(default)]
    filters: Vec<ConceptId>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChatRequest {
    #[serde(default)]
    session_id: Option<String>,
    event: Event,
}

#[derive(Serialize, Deserialize)]
pub struct ChatResponse {
    pub session_id: String,
    pub reply: BotReply,
}

#[derive(Serialize, Deserialize)]
pub struct DatasetResponse {
    pub record: DatasetRecord,
    pub concepts: Vec<ConceptRef>,
}

async fn search(State(state): State<AppState>, body: Bytes) -> Result<Json<SearchResponse>, ApiError> {
    let req: SearchRequest = parse_body(&body)?;
    let lang = match req.lang.as_deref() {
        None | Some("") => None,
        Some(code) => Some(code.parse::<LanguageTag>().map_err(|e| ApiError::bad_request(e.to_string()))?),
    };
    let engine = state.engine.clone();
    let resp = blocking(move || engine.search(&req.text, lang)).await?;
    Ok(Json(resp))
}

async fn refine(State(state): State<AppState>, body: Bytes) -> Result<Json<SearchResponse>, ApiError> {
    let req: RefineRequest = parse_body(&body)?;
    let query: BTreeSet<ConceptId> = req.query_concepts.into_iter().collect();
    let filters: BTreeSet<ConceptId> = req.filters.into_iter().collect();
    let engine = state.engine.clone();
    Ok(Json(blocking(move || engine.refine(&query, &filters)).await))
}

async fn chat(State(state): State<AppState>, body: Bytes) -> Result<Json<ChatResponse>, ApiError> {
    let req: ChatRequest = parse_body(&body)?;
    let now = (state.clock)();
    let slot = match req.session_id {
        None => state.sessions.create(uuid::Uuid::new_v4().to_string(), now),
        Some(id) => state.sessions.get(&id, now).map_err(|e| match e {
            SessionError::Unknown => ApiError::new(StatusCode::NOT_FOUND, "unknown_session", format!("no session {id}")),
            SessionError::Expired => ApiError::new(StatusCode::NOT_FOUND, "session_expired", format!("session {id} expired")),
        })?,
    };
    slot.touch(now);
    let mut session = slot.session.clone().lock_owned().await;
    let engine = state.engine.clone();
    let clock = state.clock.clone();
    let (session, result) = blocking(move || {
        let r = dialogue::step(&mut session, &req.event, &engine, clock());
        (session, r)
    })
    .await;
    slot.touch(session.last_activity);
    match result {
        Ok(reply) => Ok(Json(ChatResponse { session_id: session.session_id.clone(), reply })),
        Err(DialogueError::LinkerUnavailable(e)) => Err(ApiError::new(
            StatusCode::SERVICE_UNAVAILABLE,
            "linker_unavailable",
            format!("{} ({e})", dialogue::APOLOGY),
        )),
    }
}

async fn dataset(
    State(state): State<AppState>,
    Path((portal_id, dataset_id)): Path<(String, String)>,
) -> Result<Json<DatasetResponse>, ApiError> {
    let index = &state.engine.index;
    let d = index
        .ordinal(&portal_id, &dataset_id)
        .and_then(|o| index.dataset(o))
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "unknown_dataset", format!("no dataset {portal_id}/{dataset_id}")))?;
    let lang = d.record.language;
    Ok(Json(DatasetResponse {
        record: d.record.clone(),
        concepts: d.concepts.iter().map(|c| state.engine.concept_ref(*c, lang)).collect(),
    }))
}

async fn health(State(state): State<AppState>) -> Json<serde_json::Value> {
    let index = &state.engine.index;
    Json(json!({"status": "ok", "datasets": index.len(), "concepts": index.concept_count()}))
}

async fn not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "not_found", "no such endpoint")
}

async fn log_requests(req: Request, next: Next) -> Response {
    let method = req.method().clone();
    let path = req.uri().path().to_string();
    let started = Instant::now();
    let resp = next.run(req).await;
    tracing::info!(
        target: "odsearch::request",
        method = %method,
        path = %path,
        status = resp.status().as_u16(),
        micros = started.elapsed().as_micros() as u64,
    );
    resp
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/v1/search", post(search))
        .route("/v1/refine", post(refine))
        .route("/v1/chat", post(chat))
        .route("/v1/dataset/{portal_id}/{dataset_id}", get(dataset))
        .route("/v1/health", get(health))
        .fallback(not_found)
        .layer(middleware::from_fn(log_requests))
        .with_state(state)
}

/// Evicts idle sessions every `interval` until the runtime shuts down.
pub fn spawn_session_gc(state: &AppState, interval: Duration) -> tokio::task::JoinHandle<()> {
    let sessions = state.sessions.clone();
    let clock = state.clock.clone();
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(interval);
        tick.set_missed_tick_behavior(tokio::time::MissedTickBehavior::Delay);
        loop {
            tick.tick().await;
            let evicted = sessions.session_gc(clock());
            if evicted > 0 {
                tracing::info!(target: "odsearch::sessions", evicted, "expired sessions removed");
            }
        }
    })
}

/// Binds `addr` and serves until ctrl-c.
pub async fn serve(state: AppState, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    serve_on(state, listener, async {
        let _ = tokio::signal::ctrl_c().await;
    })
    .await
}

pub async fn serve_on(
    state: AppState,
    listener: tokio::net::TcpListener,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    let gc_every = Duration::from_millis((state.sessions.ttl_ms() / 4).clamp(1000, 60_000));
    let gc = spawn_session_gc(&state, gc_every);
    tracing::info!(target: "odsearch::serve", addr = %listener.local_addr()?, datasets = state.engine.index.len(), "listening");
    let result = axum::serve(listener, router(state)).with_graceful_shutdown(shutdown).await;
    gc.abort();
    result
}
