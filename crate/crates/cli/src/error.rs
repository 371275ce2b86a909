use std::fmt;

/// Failure classes mapped onto process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Exit code 1.
    Runtime(String),
    /// Exit code 2.
    Config(String),
    /// Exit code 3.
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Runtime(_) => 1,
            CliError::Config(_) => 2,
            CliError::Check(_) => 3,
        }
    }

    pub fn config(field: &str, msg: impl fmt::Display) -> Self {
        CliError::Config(format!("{field}: {msg}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Runtime(m) => write!(f, "runtime error: {m}"),
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Check(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn runtime(e: impl fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<pde_frontend::FrontendError> for CliError {
    fn from(e: pde_frontend::FrontendError) -> Self {
        use pde_frontend::FrontendError as F;
        match e {
            F::Unpaired { .. } | F::InvalidSpec(_) => CliError::config("nonlinearity", e),
            F::PotentialMismatch(_) => CliError::config("potential", e),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<spectrum::SpectrumError> for CliError {
    fn from(e: spectrum::SpectrumError) -> Self {
        use spectrum::SpectrumError as S;
        match e {
            S::InvalidDecay(_) => CliError::config("potential.m", e),
            S::InvalidRequest(_) => CliError::config("experiment", e),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<normalform::NormalFormError> for CliError {
    fn from(e: normalform::NormalFormError) -> Self {
        match e {
            normalform::NormalFormError::InvalidParams(_) => CliError::config("nf", e),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<dynamics::DynamicsError> for CliError {
    fn from(e: dynamics::DynamicsError) -> Self {
        use dynamics::DynamicsError as D;
        match e {
            D::InvalidConfig(_) => CliError::config("integrate", e),
            D::DegenerateLadder(_) => CliError::config("experiment.ladder", e),
            other => CliError::Runtime(other.to_string()),
        }
    }
}
