use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("no positive fixed point: gamma = {gamma} <= r(1+c) = {threshold}")]
    NoPositiveFixedPoint { gamma: f64, threshold: f64 },

    #[error("no critical parameter gamma0 (real cubic roots: {roots:?})")]
    NoCriticalParameter { roots: Vec<f64> },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by inputs that fail a precondition, as opposed
    /// to I/O or runtime failures.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::NoPositiveFixedPoint { .. }
                | Error::NoCriticalParameter { .. }
                | Error::Precondition(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
