use thiserror::Error;

#[derive(Debug, Error)]
pub enum NormalFormError {
    #[error(transparent)]
    Poly(#[from] poly_core::PolyError),
    #[error(transparent)]
    Bracket(#[from] bracket::BracketError),
    #[error("numerical small divisor underflow")]
    SmallDivisorUnderflow,
    #[error("stage {stage}: {source}")]
    Stage { stage: usize, source: Box<NormalFormError> },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, NormalFormError>;
