use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BracketError {
    #[error(transparent)]
    Poly(#[from] poly_core::PolyError),
    #[error("lattice mismatch")]
    LatticeMismatch,
    #[error("missing ledger")]
    MissingLedger,
    #[error("non-ascending generator")]
    NonAscendingGenerator,
    #[error("fixed-point iteration did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("transform out of domain")]
    OutOfDomain,
}

pub type Result<T> = std::result::Result<T, BracketError>;
