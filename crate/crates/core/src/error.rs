use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("root finder did not converge at k = {k} eV (coefficients {coefficients:?})")]
    RootFinder { k: f64, coefficients: Vec<[f64; 2]> },

    #[error("degenerate dispersion roots at k = {k} eV (relative separation {separation:e})")]
    DegenerateRoots { k: f64, separation: f64 },

    #[error("internal branch error: {0}")]
    Branch(String),

    #[error("quadrature for {what} did not converge: value {value:e}, error estimate {error:e}")]
    Quadrature { what: String, value: f64, error: f64 },

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }

    pub(crate) fn scenario(msg: impl Into<String>) -> Self {
        Error::Scenario(msg.into())
    }
}
