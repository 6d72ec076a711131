use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vorticity must be finite and non-negative, got {0}")]
    InvalidVorticity(f64),

    #[error("degenerate coefficient: {0} is zero")]
    DegenerateCoefficient(&'static str),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error(
        "grid mismatch: expected n={expected_n}, L={expected_len}; got n={got_n}, L={got_len}"
    )]
    GridMismatch {
        expected_n: usize,
        expected_len: f64,
        got_n: usize,
        got_len: f64,
    },

    #[error("non-finite sample at index {0}")]
    NonFinite(usize),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
