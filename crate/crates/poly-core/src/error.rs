use thiserror::Error;

/// Errors raised by the polynomial layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("mode {0} is outside the lattice")]
    ModeOutOfLattice(i32),
    #[error("lattice mismatch")]
    LatticeMismatch,
    #[error("unstructured coefficients")]
    Unstructured,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, PolyError>;
