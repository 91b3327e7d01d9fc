//! HTTP JSON API over the step-tracing engine.
//!
//! Routes (all under `/api/v1`):
//! `GET /health`, `GET /methods`, `POST /compute`, `POST /verify-sw`.

use std::net::SocketAddr;

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::{Deserialize, Serialize};
use steplinalg::matmul::Variant;
use steplinalg::pedagogy::verify_sw_basis;
use steplinalg::registry::{compute, ComputeRequest, Limits, METHODS};
use steplinalg::Error;
use tokio::net::TcpListener;
use tower_http::cors::CorsLayer;

pub const BODY_LIMIT: usize = 1 << 20;
pub const MAX_VERIFY_SAMPLES: usize = 10_000;

#[derive(Clone, Copy, Debug)]
pub struct ServiceConfig {
    pub cors: bool,
    pub limits: Limits,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig { cors: true, limits: Limits::default() }
    }
}

#[derive(Debug, Serialize)]
struct ErrorBody<'a> {
    error: &'a str,
    message: String,
}

fn json(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json; charset=utf-8")], body).into_response()
}

fn error(status: StatusCode, code: &str, message: impl Into<String>) -> Response {
    let body = ErrorBody { error: code, message: message.into() };
    json(status, serde_json::to_string(&body).expect("error body serializes"))
}

pub fn status_for(e: &Error) -> StatusCode {
    match e {
        Error::DimensionCapExceeded { .. } => StatusCode::PAYLOAD_TOO_LARGE,
        Error::MethodTaskMismatch { .. } => StatusCode::UNPROCESSABLE_ENTITY,
        _ => StatusCode::BAD_REQUEST,
    }
}

fn engine_error(e: &Error) -> Response {
    error(status_for(e), e.code(), e.to_string())
}

/// Syntax errors are `MalformedJson`; well-formed bodies of the wrong shape
/// (unknown task, unparsable entry, ragged rows) are `InvalidRequest`.
fn parse<T: for<'de> Deserialize<'de>>(body: &[u8]) -> Result<T, (&'static str, String)> {
    serde_json::from_slice(body).map_err(|e| {
        use serde_json::error::Category;
        let code = match e.classify() {
            Category::Syntax | Category::Eof | Category::Io => "MalformedJson",
            Category::Data => "InvalidRequest",
        };
        (code, e.to_string())
    })
}

async fn health() -> Response {
    json(StatusCode::OK, r#"{"status":"ok"}"#.to_string())
}

async fn methods() -> Response {
    json(StatusCode::OK, serde_json::to_string(METHODS).expect("registry serializes"))
}

async fn compute_handler(State(cfg): State<ServiceConfig>, body: Bytes) -> Response {
    let req: ComputeRequest = match parse(&body) {
        Ok(r) => r,
        Err((code, message)) => return error(StatusCode::BAD_REQUEST, code, message),
    };
    match compute(&req, cfg.limits) {
        Ok(resp) => json(StatusCode::OK, resp.to_json()),
        Err(e) => engine_error(&e),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyRequest {
    #[serde(default)]
    variant: Variant,
    #[serde(default = "default_samples")]
    samples: usize,
    #[serde(default = "default_seed")]
    seed: u64,
}

fn default_samples() -> usize {
    50
}

fn default_seed() -> u64 {
    42
}

async fn verify_sw(body: Bytes) -> Response {
    let req: VerifyRequest = if body.iter().all(u8::is_ascii_whitespace) {
        VerifyRequest { variant: Variant::default(), samples: default_samples(), seed: default_seed() }
    } else {
        match parse(&body) {
            Ok(r) => r,
            Err((code, message)) => return error(StatusCode::BAD_REQUEST, code, message),
        }
    };
    if req.samples > MAX_VERIFY_SAMPLES {
        return engine_error(&Error::ConfigInvalid(format!("samples must be at most {MAX_VERIFY_SAMPLES}")));
    }
    match verify_sw_basis(req.variant, req.samples, req.seed) {
        Ok(report) => json(StatusCode::OK, serde_json::to_string(&report).expect("report serializes")),
        Err(e) => engine_error(&e),
    }
}

async fn not_found() -> Response {
    error(StatusCode::NOT_FOUND, "NotFound", "no such endpoint")
}

pub fn router(cfg: ServiceConfig) -> Router {
    let api = Router::new()
        .route("/api/v1/health", get(health))
        .route("/api/v1/methods", get(methods))
        .route("/api/v1/compute", post(compute_handler))
        .route("/api/v1/verify-sw", post(verify_sw))
        .fallback(not_found)
        .layer(DefaultBodyLimit::max(BODY_LIMIT))
        .with_state(cfg);
    if cfg.cors {
        api.layer(CorsLayer::permissive())
    } else {
        api
    }
}

/// Serves on an already-bound listener until `shutdown` resolves.
pub async fn serve_on(
    listener: TcpListener,
    cfg: ServiceConfig,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(cfg)).with_graceful_shutdown(shutdown).await
}

/// Binds `addr` and serves until Ctrl-C.
pub async fn serve(addr: SocketAddr, cfg: ServiceConfig) -> std::io::Result<()> {
    let listener = TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    serve_on(listener, cfg, async {
        let _ = tokio::signal::ctrl_c().await;
    })
    .await
}
