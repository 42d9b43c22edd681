//! HTTP endpoints over a swappable [`NameIndex`].

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::{Arc, RwLock};

use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde_json::json;

use super::index::NameIndex;
use crate::model::Direction;

pub const DEFAULT_LIMIT: usize = 10;
pub const MAX_LIMIT: usize = 1000;

/// Shared, atomically replaceable index.
#[derive(Clone)]
pub struct ResolverHandle {
    index: Arc<RwLock<Arc<dyn NameIndex>>>,
}

impl ResolverHandle {
    pub fn new(index: impl NameIndex + 'static) -> Self {
        Self {
            index: Arc::new(RwLock::new(Arc::new(index))),
        }
    }

    pub fn current(&self) -> Arc<dyn NameIndex> {
        self.index.read().unwrap_or_else(|p| p.into_inner()).clone()
    }

    /// In-flight requests finish on the index they started with.
    pub fn reload(&self, index: impl NameIndex + 'static) {
        *self.index.write().unwrap_or_else(|p| p.into_inner()) = Arc::new(index);
    }
}

struct ApiError {
    status: StatusCode,
    detail: String,
}

impl ApiError {
    fn bad_request(detail: impl Into<String>) -> Self {
        Self {
            status: StatusCode::BAD_REQUEST,
            detail: detail.into(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let error = if self.status == StatusCode::NOT_FOUND { "not_found" } else { "bad_request" };
        (self.status, Json(json!({"error": error, "detail": self.detail}))).into_response()
    }
}

async fn resolve(State(h): State<ResolverHandle>, Query(params): Query<HashMap<String, String>>) -> Result<Response, ApiError> {
    let q = params.get("q").ok_or_else(|| ApiError::bad_request("missing query parameter `q`"))?;
    let limit = match params.get("limit") {
        None => DEFAULT_LIMIT,
        Some(text) => text
            .parse::<usize>()
            .ok()
            .filter(|l| (1..=MAX_LIMIT).contains(l))
            .ok_or_else(|| ApiError::bad_request(format!("`limit` must be an integer in 1..={MAX_LIMIT}")))?,
    };
    Ok(Json(h.current().resolve(q, limit)).into_response())
}

async fn aliases(State(h): State<ResolverHandle>, Query(params): Query<HashMap<String, String>>) -> Result<Response, ApiError> {
    let slug = params.get("slug").ok_or_else(|| ApiError::bad_request("missing query parameter `slug`"))?;
    let expand = params
        .get("expand")
        .map(|e| e.parse::<Direction>())
        .transpose()
        .map_err(ApiError::bad_request)?;
    match h.current().aliases(slug, expand) {
        Some(found) => Ok(Json(found).into_response()),
        None => Err(ApiError {
            status: StatusCode::NOT_FOUND,
            detail: format!("unknown slug {slug:?}"),
        }),
    }
}

async fn healthz(State(h): State<ResolverHandle>) -> Response {
    Json(json!({"status": "ok", "entries": h.current().len()})).into_response()
}

pub fn router(handle: ResolverHandle) -> Router {
    Router::new()
        .route("/resolve", get(resolve))
        .route("/aliases", get(aliases))
        .route("/healthz", get(healthz))
        .with_state(handle)
}

/// Serves until `shutdown` resolves.
pub async fn serve(
    addr: SocketAddr,
    handle: ResolverHandle,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("resolver listening on {}", listener.local_addr()?);
    axum::serve(listener, router(handle)).with_graceful_shutdown(shutdown).await
}
