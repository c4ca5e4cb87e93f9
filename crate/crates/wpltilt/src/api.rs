//! HTTP JSON API over the session store.

use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::json;
use wpl_core::Error;

use crate::session::{step_wire, SessionSpec, Store};
use crate::AppError;

/// Failure with its HTTP status and JSON body.
#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: serde_json::Value,
}

impl ApiError {
    fn new(status: StatusCode, kind: &str, message: String) -> Self {
        ApiError { status, body: json!({ "error": kind, "message": message }) }
    }

    fn unknown_session(id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "unknown-session", format!("no session {id:?}"))
    }
}

impl From<AppError> for ApiError {
    fn from(e: AppError) -> Self {
        let message = e.to_string();
        match e {
            AppError::Engine(Error::UnknownLabel(_)) | AppError::Engine(Error::NoPolarity(_)) => {
                ApiError::new(StatusCode::CONFLICT, "invalid-vertex", message)
            }
            AppError::Engine(Error::WindowExhausted(trace)) => ApiError {
                status: StatusCode::UNPROCESSABLE_ENTITY,
                body: json!({
                    "error": "window-exhausted",
                    "message": message,
                    "trace": trace.split("; ").collect::<Vec<_>>(),
                }),
            },
            AppError::Engine(Error::OutsideWindow { .. }) => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "window-exhausted", message)
            }
            AppError::Input(_) | AppError::Json(_) | AppError::Engine(_) => {
                ApiError::new(StatusCode::BAD_REQUEST, "invalid-input", message)
            }
            AppError::UnknownSuite(_) => ApiError::new(StatusCode::NOT_FOUND, "unknown-suite", message),
            AppError::Io(_) => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "io", message),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type ApiResult = Result<Json<serde_json::Value>, ApiError>;

pub fn router(store: Arc<Store>) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(state))
        .route("/sessions/{id}/reflect", post(reflect))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/checks", get(checks))
        .with_state(store)
}

fn persist(store: &Store) -> Result<(), ApiError> {
    store.persist().map_err(ApiError::from)
}

async fn create(State(store): State<Arc<Store>>, body: Json<serde_json::Value>) -> Result<(StatusCode, Json<serde_json::Value>), ApiError> {
    let spec: SessionSpec = match body.0.get("descriptor") {
        Some(_) => serde_json::from_value(body.0.clone()).map_err(AppError::from)?,
        None => SessionSpec { descriptor: serde_json::from_value(body.0.clone()).map_err(AppError::from)?, reference: None },
    };
    let session = store.create(spec)?;
    let state = session.lock().expect("session lock").state();
    persist(&store)?;
    Ok((StatusCode::CREATED, Json(json!({ "id": state.id, "state": state }))))
}

async fn state(State(store): State<Arc<Store>>, Path(id): Path<String>) -> ApiResult {
    let s = store.get(&id).ok_or_else(|| ApiError::unknown_session(&id))?;
    let s = s.lock().expect("session lock");
    Ok(Json(serde_json::to_value(s.state()).map_err(AppError::from)?))
}

async fn reflect(State(store): State<Arc<Store>>, Path(id): Path<String>, body: Json<serde_json::Value>) -> ApiResult {
    let handle = store.get(&id).ok_or_else(|| ApiError::unknown_session(&id))?;
    let vertex = body
        .0
        .get("vertex")
        .and_then(|v| v.as_i64().or_else(|| v.as_str().and_then(|s| s.trim().parse().ok())))
        .ok_or_else(|| AppError::Input("body must be {\"vertex\": <label>}".into()))?;
    let out = {
        let mut s = handle.lock().expect("session lock");
        let step = s.reflect(vertex)?;
        json!({ "state": s.state(), "step": step_wire(s.tilting.k0(), &step) })
    };
    persist(&store)?;
    Ok(Json(out))
}

async fn undo(State(store): State<Arc<Store>>, Path(id): Path<String>) -> ApiResult {
    let handle = store.get(&id).ok_or_else(|| ApiError::unknown_session(&id))?;
    let out = {
        let mut s = handle.lock().expect("session lock");
        let undone = s.undo()?;
        json!({ "state": s.state(), "undone": undone })
    };
    persist(&store)?;
    Ok(Json(out))
}

async fn checks(State(store): State<Arc<Store>>, Path(id): Path<String>) -> ApiResult {
    let s = store.get(&id).ok_or_else(|| ApiError::unknown_session(&id))?;
    let s = s.lock().expect("session lock");
    Ok(Json(serde_json::to_value(s.checks()?).map_err(AppError::from)?))
}

pub async fn serve(store: Arc<Store>, port: u16) -> Result<(), AppError> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(store))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
