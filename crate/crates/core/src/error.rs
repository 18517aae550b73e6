use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("curvature must be -1, 0 or 1, got {0}")]
    InvalidCurvature(i64),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("parameters are not in the Kowalewski case (c1 = c2 = 2 c3, a3 = 0)")]
    NotKowalewski,

    #[error("operation requires {expected}, got k = {got}")]
    Curvature { expected: &'static str, got: i64 },

    #[error("operation requires the {expected} inertia mode")]
    WrongMode { expected: &'static str },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("degenerate point: {0}")]
    Degenerate(String),

    #[error("x is real: the separating variables coalesce")]
    Coalescence,

    #[error("no leading-order solution: {0}")]
    NoLeadingOrder(String),

    #[error("stage n = {n} is singular with an inconsistent right-hand side (residual {residual:e})")]
    Obstruction { n: usize, residual: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
