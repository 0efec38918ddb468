use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("invalid node set: {0}")]
    InvalidSet(String),

    #[error("node set is not connected")]
    Disconnected,

    #[error("{what} exceeds cap of {limit} (reached {reached})")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        reached: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("bound step has a zero denominator (isolated set without source inflow)")]
    ZeroDenominator,

    #[error("quadrature did not converge to {tolerance:e} on [{lo}, {hi}]")]
    Quadrature { lo: f64, hi: f64, tolerance: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn topology(msg: impl Into<String>) -> Self {
        Error::InvalidTopology(msg.into())
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
