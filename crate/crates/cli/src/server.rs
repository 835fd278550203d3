//! JSON HTTP API over a loaded [`Recommender`].
//!
//! - `POST /api/recommend` with `{"text": "...", "k": 3}`
//! - `GET /api/fonts`
//! - `GET /healthz`

use std::sync::Arc;

use anyhow::{Context, Result};
use axum::extract::rejection::JsonRejection;
use axum::extract::{DefaultBodyLimit, State};
use axum::http::{HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use fontsense_core::{Error, Recommender};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::cors::{AllowOrigin, CorsLayer};

pub const MAX_BODY_BYTES: usize = 16 * 1024;
pub const DEFAULT_K: i64 = 3;

#[derive(Debug, Deserialize)]
pub struct RecommendRequest {
    #[serde(default)]
    pub text: String,
    pub k: Option<i64>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ApiError {
    pub error: String,
    pub message: String,
}

fn error(status: StatusCode, code: &str, message: impl Into<String>) -> Response {
    (
        status,
        Json(ApiError {
            error: code.into(),
            message: message.into(),
        }),
    )
        .into_response()
}

pub fn router(recommender: Arc<Recommender>, cors_origins: &[String]) -> Result<Router> {
    let mut app = Router::new()
        .route("/api/recommend", post(recommend))
        .route("/api/fonts", get(fonts))
        .route("/healthz", get(health))
        .layer(DefaultBodyLimit::max(MAX_BODY_BYTES))
        .with_state(recommender);
    if !cors_origins.is_empty() {
        let origins = cors_origins
            .iter()
            .map(|o| HeaderValue::from_str(o).with_context(|| format!("invalid CORS origin `{o}`")))
            .collect::<Result<Vec<_>>>()?;
        app = app.layer(
            CorsLayer::new()
                .allow_origin(AllowOrigin::list(origins))
                .allow_methods([Method::GET, Method::POST])
                .allow_headers([axum::http::header::CONTENT_TYPE]),
        );
    }
    Ok(app)
}

async fn recommend(
    State(rec): State<Arc<Recommender>>,
    body: std::result::Result<Json<RecommendRequest>, JsonRejection>,
) -> Response {
    let Json(req) = match body {
        Ok(body) => body,
        Err(rejection) if rejection.status() == StatusCode::PAYLOAD_TOO_LARGE => {
            return error(
                StatusCode::PAYLOAD_TOO_LARGE,
                "payload_too_large",
                format!("request body exceeds {MAX_BODY_BYTES} bytes"),
            )
        }
        Err(rejection) => return error(StatusCode::BAD_REQUEST, "bad_request", rejection.body_text()),
    };
    if req.text.trim().is_empty() {
        return error(StatusCode::BAD_REQUEST, "empty_text", "text must not be empty");
    }
    let k = req.k.unwrap_or(DEFAULT_K);
    let font_count = rec.font_count();
    if k < 1 || k as usize > font_count {
        return error(
            StatusCode::BAD_REQUEST,
            "bad_k",
            format!("k must be in 1..={font_count}, got {k}"),
        );
    }
    match rec.recommend(&req.text, k as usize) {
        Ok(resp) => Json(resp).into_response(),
        Err(e @ Error::UnknownId(_)) => error(StatusCode::BAD_REQUEST, "unknown_text", e.to_string()),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()),
    }
}

async fn fonts(State(rec): State<Arc<Recommender>>) -> Response {
    Json(rec.catalog().clone()).into_response()
}

async fn health(State(rec): State<Arc<Recommender>>) -> Response {
    Json(json!({"status": "ok", "model_id": rec.model_id()})).into_response()
}
