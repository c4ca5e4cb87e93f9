//! Command line, HTTP API and verification suites on top of `wpl-core`.

pub mod api;
pub mod cli;
pub mod golden;
pub mod session;
pub mod suite;
pub mod wire;

/// Errors surfaced to users of the CLI and the HTTP API.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Engine(#[from] wpl_core::Error),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
