use thiserror::Error;

#[derive(Debug, Error)]
pub enum FrontendError {
    #[error(transparent)]
    Poly(#[from] poly_core::PolyError),
    #[error(transparent)]
    Spectrum(#[from] spectrum::SpectrumError),
    #[error("nonlinearity is not real: term (a={a}, b={b}, kappa={kappa}) has no conjugate partner (a={b}, b={a}, kappa={neg})", neg = -kappa)]
    Unpaired { a: u32, b: u32, kappa: i32 },
    #[error("invalid nonlinearity: {0}")]
    InvalidSpec(String),
    #[error("potential does not match the equation: {0}")]
    PotentialMismatch(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, FrontendError>;
