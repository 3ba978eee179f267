//! HTTP facade over the gate and the project store.
//!
//! All endpoints live under `/api/v1` and speak the project document
//! schema. Only project creation and iteration append write to the store.
//! The dashboard bundle, when present, is served from `/`.

mod api;
mod error;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use aap_core::{decide, what_if};
use aap_store::ProjectStore;
use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use tower_http::services::{ServeDir, ServeFile};

pub use api::*;
pub use error::{ApiError, ApiFailure};

/// Environment variable naming the project document directory.
pub const STORE_DIR_ENV: &str = "AAP_STORE_DIR";
/// Environment variable naming a built dashboard bundle to serve at `/`.
pub const DASHBOARD_DIR_ENV: &str = "AAP_DASHBOARD_DIR";
pub const DEFAULT_PORT: u16 = 8640;

type ApiResult<T> = Result<T, ApiFailure>;

#[derive(Clone)]
pub struct AppState {
    store: Arc<ProjectStore>,
}

impl AppState {
    pub fn new(store: ProjectStore) -> Self {
        AppState {
            store: Arc::new(store),
        }
    }
}

fn parse<T: DeserializeOwned>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiFailure::malformed(e.to_string()))
}

/// Runs a blocking store operation off the async executor.
async fn blocking<T, F>(state: &AppState, op: F) -> ApiResult<T>
where
    F: FnOnce(&ProjectStore) -> ApiResult<T> + Send + 'static,
    T: Send + 'static,
{
    let store = Arc::clone(&state.store);
    tokio::task::spawn_blocking(move || op(&store))
        .await
        .map_err(|e| {
            ApiFailure::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string())
        })?
}

async fn decide_handler(body: Bytes) -> ApiResult<Json<DecideResponse>> {
    let req: DecideRequest = parse(&body)?;
    let recommendation = decide(&req.snapshot, &req.config.unwrap_or_default())?;
    Ok(Json(DecideResponse {
        trace: recommendation.trace.clone(),
        recommendation,
    }))
}

async fn whatif_handler(body: Bytes) -> ApiResult<Json<aap_core::Recommendation>> {
    let req: WhatIfRequest = parse(&body)?;
    let overrides = req.overrides()?;
    let config = req.config.unwrap_or_default();
    Ok(Json(what_if(&req.snapshot, overrides, &config)?))
}

async fn create_project(State(state): State<AppState>, body: Bytes) -> ApiResult<Response> {
    let req: CreateProjectRequest = parse(&body)?;
    let record = blocking(&state, move |store| {
        Ok(store.create(&req.name, req.config.unwrap_or_default(), req.id)?)
    })
    .await?;
    Ok((StatusCode::CREATED, Json(record)).into_response())
}

async fn list_projects(State(state): State<AppState>) -> ApiResult<Response> {
    let list = blocking(&state, |store| Ok(store.list()?)).await?;
    Ok(Json(list).into_response())
}

async fn get_project(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let record = blocking(&state, move |store| Ok(store.load(&id)?)).await?;
    Ok(Json(record).into_response())
}

async fn append_iteration(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Response> {
    let req: AppendIterationRequest = parse(&body)?;
    let (revision, input) = req.into_input()?;
    let (iteration, revision) =
        blocking(&state, move |store| Ok(store.append(&id, revision, input)?)).await?;
    Ok((
        StatusCode::CREATED,
        Json(AppendIterationResponse {
            iteration,
            revision,
        }),
    )
        .into_response())
}

async fn history(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let record = blocking(&state, move |store| Ok(store.load(&id)?)).await?;
    Ok(Json(record.iterations).into_response())
}

async fn paralysis(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let record = blocking(&state, move |store| Ok(store.load(&id)?)).await?;
    Ok(Json(record.paralysis()).into_response())
}

async fn api_not_found() -> ApiFailure {
    ApiFailure::new(StatusCode::NOT_FOUND, "not_found", "no such endpoint")
}

const PLACEHOLDER_PAGE: &str =
    "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>aap</title></head>\
<body><h1>aap service</h1><p>No dashboard bundle is configured. Set AAP_DASHBOARD_DIR to a built \
bundle, or use the JSON API under <code>/api/v1</code>.</p></body></html>\n";

/// Builds the router. `dashboard` is a directory holding a built
/// dashboard bundle with an `index.html`.
pub fn router(state: AppState, dashboard: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/decide", post(decide_handler))
        .route("/whatif", post(whatif_handler))
        .route("/projects", post(create_project).get(list_projects))
        .route("/projects/{id}", get(get_project))
        .route("/projects/{id}/iterations", post(append_iteration))
        .route("/projects/{id}/history", get(history))
        .route("/projects/{id}/paralysis", get(paralysis))
        .fallback(api_not_found)
        .with_state(state);

    let app = Router::new().nest("/api/v1", api);
    match dashboard {
        Some(dir) => {
            let index = dir.join("index.html");
            app.fallback_service(ServeDir::new(dir).fallback(ServeFile::new(index)))
        }
        None => app.route("/", get(|| async { Html(PLACEHOLDER_PAGE) })),
    }
}

#[derive(Debug, Clone)]
pub struct ServeOptions {
    pub addr: SocketAddr,
    pub store_dir: PathBuf,
    pub dashboard: Option<PathBuf>,
}

/// Binds and serves until Ctrl-C.
pub async fn serve(options: ServeOptions) -> std::io::Result<()> {
    let store =
        ProjectStore::open(&options.store_dir).map_err(|e| std::io::Error::other(e.to_string()))?;
    let app = router(AppState::new(store), options.dashboard);
    let listener = tokio::net::TcpListener::bind(options.addr).await?;
    eprintln!(
        "aap service listening on http://{} (store: {})",
        listener.local_addr()?,
        options.store_dir.display()
    );
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
