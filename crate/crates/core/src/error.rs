use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is singular or numerically rank deficient")]
    Singular,

    #[error("determinant {det} is outside the unit-determinant guard")]
    DeterminantOutOfRange { det: f64 },

    #[error("element is not regular: orthogonal iteration did not contract in {iterations} steps")]
    NotRegular { iterations: usize },

    #[error("rank {rank} too large for Weyl group enumeration (max {max})")]
    RankTooLarge { rank: usize, max: usize },

    #[error("invalid simple root index {index} for rank {rank}")]
    InvalidRootIndex { index: usize, rank: usize },

    #[error("matrix is not in K_Theta: {0}")]
    NotInKTheta(String),

    #[error("membership is undecidable for a finitely generated semigroup")]
    MembershipUndecidable,

    #[error("rejection budget of {budget} proposals exhausted at letter {step}")]
    RejectionBudgetExhausted { budget: usize, step: usize },

    #[error("no regular word found after {candidates} candidates")]
    NoRegularWordFound { candidates: usize },

    #[error("invalid semigroup spec: {0}")]
    InvalidSpec(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
