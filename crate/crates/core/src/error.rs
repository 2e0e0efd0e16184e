use thiserror::Error;

/// Errors raised by the algebra kernel, the checks and the DSL.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at q = 1 in {0}")]
    Pole(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("element does not belong to this generator set: {0}")]
    GeneratorMismatch(String),
    #[error("parity violation: {0}")]
    Parity(String),
    #[error("rewriting did not terminate after {0} steps")]
    Divergence(usize),
    #[error("element is not unipotent within the nilpotency bound: {0}")]
    NotNilpotent(String),
    #[error("generator name clash: `{0}`")]
    NameClash(String),
    #[error("cannot orient rule decreasingly: {0}")]
    Orientation(String),
    #[error("expected a homogeneous quadratic element: {0}")]
    NotQuadratic(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("{0}")]
    Semantic(String),
    #[error("unknown presentation `{0}`")]
    UnknownPresentation(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("load-time check failed for {id}: {msg}")]
    LoadCheck { id: String, msg: String },
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
