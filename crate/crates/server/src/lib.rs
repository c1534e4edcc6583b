//! HTTP front end: the search API, record details, vocabularies, image
//! files and the browser bundle, all served read-only from state loaded at
//! startup.
//!
//! | route                    | response                                  |
//! |--------------------------|-------------------------------------------|
//! | `GET /api/search`        | result page, see [`vqbrowse_core::wire`]  |
//! | `GET /api/records/{name}`| full record with heatmaps and entropy     |
//! | `GET /api/vocab`         | label vocabularies in file order          |
//! | `GET /images/{name}`     | image bytes from the image directory      |
//! | `GET /` and other paths  | files from the UI bundle directory        |

mod config;
mod files;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use axum::body::Body;
use axum::extract::{Path, RawQuery, Request, State};
use axum::http::{header, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use thiserror::Error;
use vqbrowse_core::wire::{self, ApiError};
use vqbrowse_core::{load_corpus, CorpusError, Engine};

pub use config::{ConfigError, ConfigFile, LogLevel, ServerConfig, DEFAULT_LISTEN};

/// Read-only state shared by all handlers.
#[derive(Debug)]
pub struct AppState {
    pub engine: Engine,
    pub image_dir: Option<PathBuf>,
    pub ui_dir: Option<PathBuf>,
}

impl AppState {
    pub fn new(engine: Engine) -> Self {
        let image_dir = engine.corpus().image_dir().map(|p| p.to_path_buf());
        AppState {
            engine,
            image_dir,
            ui_dir: None,
        }
    }

    pub fn with_image_dir(mut self, dir: Option<PathBuf>) -> Self {
        if dir.is_some() {
            self.image_dir = dir;
        }
        self
    }

    pub fn with_ui_dir(mut self, dir: Option<PathBuf>) -> Self {
        self.ui_dir = dir;
        self
    }

    pub fn load(config: &ServerConfig) -> Result<Self, ServerError> {
        let corpus = load_corpus(&config.corpus_dir)?;
        tracing::info!(
            records = corpus.len(),
            dir = %config.corpus_dir.display(),
            "corpus loaded"
        );
        let engine = Engine::new(corpus);
        Ok(AppState::new(engine)
            .with_image_dir(config.image_dir.clone())
            .with_ui_dir(config.ui_dir.clone()))
    }
}

#[derive(Debug, Error)]
pub enum ServerError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot listen on {addr}: {source}")]
    Bind {
        addr: String,
        #[source]
        source: std::io::Error,
    },
    #[error("server error: {0}")]
    Io(#[from] std::io::Error),
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/search", get(search))
        .route("/api/records/{filename}", get(record))
        .route("/api/vocab", get(vocab))
        .route("/images/{*path}", get(files::image))
        .fallback(files::ui)
        .layer(middleware::from_fn(log_request))
        .with_state(state)
}

/// Loads the corpus, binds and serves until the process is stopped.
pub async fn serve(config: ServerConfig) -> Result<(), ServerError> {
    let state = Arc::new(AppState::load(&config)?);
    let listener = tokio::net::TcpListener::bind(&config.listen)
        .await
        .map_err(|source| ServerError::Bind {
            addr: config.listen.clone(),
            source,
        })?;
    let addr: SocketAddr = listener.local_addr()?;
    tracing::info!(%addr, "listening");
    axum::serve(listener, router(state)).await?;
    Ok(())
}

async fn log_request(req: Request, next: Next) -> Response {
    let method = req.method().clone();
    let uri = req.uri().clone();
    let started = Instant::now();
    let response = next.run(req).await;
    tracing::debug!(
        %method,
        %uri,
        status = response.status().as_u16(),
        micros = started.elapsed().as_micros() as u64,
        "request"
    );
    response
}

pub(crate) fn json(status: StatusCode, body: String) -> Response {
    (
        status,
        [(header::CONTENT_TYPE, "application/json")],
        Body::from(body),
    )
        .into_response()
}

pub(crate) fn error_json(status: StatusCode, code: &str, detail: impl Into<String>) -> Response {
    #[derive(serde::Serialize)]
    struct ErrorBody<'a> {
        error: &'a str,
        detail: String,
    }
    json(
        status,
        wire::to_body(&ErrorBody {
            error: code,
            detail: detail.into(),
        }),
    )
}

fn api_error(err: ApiError) -> Response {
    json(StatusCode::BAD_REQUEST, err.to_body())
}

async fn search(State(state): State<Arc<AppState>>, RawQuery(raw): RawQuery) -> Response {
    let raw = raw.unwrap_or_default();
    let pairs = url::form_urlencoded::parse(raw.as_bytes());
    match wire::search_body(&state.engine, pairs) {
        Ok(body) => json(StatusCode::OK, body),
        Err(err) => api_error(err),
    }
}

async fn record(State(state): State<Arc<AppState>>, Path(filename): Path<String>) -> Response {
    match state.engine.record_detail(&filename) {
        Some(detail) => json(StatusCode::OK, wire::to_body(&detail)),
        None => error_json(
            StatusCode::NOT_FOUND,
            "unknown_filename",
            format!("no record named `{filename}`"),
        ),
    }
}

async fn vocab(State(state): State<Arc<AppState>>) -> Response {
    json(
        StatusCode::OK,
        wire::to_body(state.engine.corpus().vocabularies()),
    )
}
