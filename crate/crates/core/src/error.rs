use thiserror::Error;

/// Errors raised by state construction, simulation, and reconstruction.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("axis is not a unit vector (norm {0})")]
    NonUnitAxis(f64),

    #[error("Bloch vector lies outside the unit ball (norm {0})")]
    BlochOutOfRange(f64),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("matrix is not positive semi-definite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("outcome probabilities sum to {0}, expected 1")]
    ProbabilitySum(f64),

    #[error("incomplete tomography data: missing setting {0}")]
    IncompleteData(String),

    #[error("setting {0} has zero shots")]
    ZeroShots(String),

    #[error("probe state does not span the operator space (condition number {0:e})")]
    IllConditionedProbe(f64),

    #[error("element chain is empty")]
    EmptyChain,

    #[error("no measurement settings given")]
    NoSettings,

    #[error("setting {0} does not match the state's qubit count")]
    SettingMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("malformed record: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
