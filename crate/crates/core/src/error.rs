use thiserror::Error;

/// Failures raised by the solvers and numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("propagation diverged at index {index}")]
    Diverged { index: usize },
    #[error("degenerate samples")]
    DegenerateSamples,
    #[error("dependent solutions")]
    DependentSolutions,
    #[error("grids do not match")]
    GridMismatch,
    #[error("bracket invalid")]
    BracketInvalid,
    #[error("empty bracket")]
    EmptyBracket,
    #[error("wrong state index: expected {expected} nodes, found {found}")]
    WrongStateIndex { expected: usize, found: usize },
    #[error("ansatz out of validity: {0}")]
    AnsatzOutOfValidity(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
