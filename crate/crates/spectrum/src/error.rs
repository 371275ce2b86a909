use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error(transparent)]
    Poly(#[from] poly_core::PolyError),
    #[error("decay exponent m must exceed 1/2, got {0}")]
    InvalidDecay(f64),
    #[error("invalid enumeration request: {0}")]
    InvalidRequest(String),
    #[error("enumeration budget of {budget} candidates exceeded")]
    BudgetExceeded { budget: usize },
    #[error("potential and lattice disagree: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, SpectrumError>;
