use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HodgeError {
    #[error("malformed scalar {0:?}")]
    ScalarSyntax(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("containment violated: {0}")]
    NotContained(String),

    #[error("matrix is not hermitian")]
    NotHermitian,

    #[error("operator is not nilpotent")]
    NotNilpotent,

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("not a pure Hodge structure: {0}")]
    NotPure(String),

    #[error("pairing twist {found} does not match weight {expected}")]
    TwistMismatch { expected: i64, found: i64 },

    #[error("grading does not come from an sl2 representation: {0}")]
    NoSl2Completion(String),

    #[error("invalid sl2 action: {0}")]
    InvalidSl2(String),

    /// Two formulations that must agree did not; indicates a convention bug.
    #[error("equivalent criteria disagree: {0}")]
    CriterionDisagreement(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("fixture error: {0}")]
    Fixture(String),
}

pub type Result<T, E = HodgeError> = std::result::Result<T, E>;
