use thiserror::Error;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Poly(#[from] poly_core::PolyError),
    #[error(transparent)]
    Bracket(#[from] bracket::BracketError),
    #[error("lattice mismatch between Hamiltonian and state")]
    LatticeMismatch,
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),
    #[error("fixed-point iteration failed at t = {t} after halving dt to {dt}")]
    NoConvergence { t: f64, dt: f64 },
    #[error("state left the finite range at t = {0}")]
    NonFinite(f64),
    #[error("degenerate ladder: {0}")]
    DegenerateLadder(String),
}

pub type Result<T> = std::result::Result<T, DynamicsError>;
