use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid variable name `{0}`")]
    InvalidVariable(String),
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("arena mismatch: {0}")]
    ArenaMismatch(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite coordinate in complex point")]
    NonFinite,
    #[error("exponent overflow in Laurent bookkeeping")]
    ExponentOverflow,
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("map is not dominant (Jacobian determinant vanishes identically)")]
    NotDominant,
    #[error("empty elimination: {0}")]
    EmptyElimination(String),
    #[error("no curve with this weight vector reaches a finite limit")]
    NoFiniteLimit,
    #[error("invalid ansatz: {0}")]
    InvalidAnsatz(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("inconsistent system: {0}")]
    Inconsistent(String),
    #[error("divergent integral: {0}")]
    Divergent(String),
    #[error("label mismatch: {0}")]
    LabelMismatch(String),
    #[error("mismatched limit points")]
    MismatchedLimits,
}

pub type Result<T> = std::result::Result<T, Error>;
