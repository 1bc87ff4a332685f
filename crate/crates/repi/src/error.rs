use thiserror::Error;

/// Error type shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate density: {0}")]
    DegenerateDensity(String),

    #[error("invalid Rényi order: {0} (must be positive and finite)")]
    InvalidOrder(f64),

    #[error("conjugate exponent undefined at r = 1")]
    UndefinedConjugate,

    #[error("integrability failure: {0}")]
    Integrability(String),

    #[error("cannot scale a random variable by zero")]
    ZeroScale,

    #[error("grid error: {0}")]
    Grid(String),

    #[error("hypothesis violation: {0}")]
    Hypothesis(String),

    #[error("simplex weights invalid: {0}")]
    Simplex(String),

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("transport error: {0}")]
    Transport(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv parse error: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;
