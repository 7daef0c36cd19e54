use thiserror::Error;

use crate::freealg::Monomial;

pub type Result<T> = std::result::Result<T, NcError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NcError {
    #[error("ambient variable count mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("letter index {index} outside 1..={g}")]
    IndexOutOfAmbient { index: usize, g: usize },

    #[error("polynomial contains direction letters but no direction tuple was supplied")]
    MissingDirection,

    #[error("matrix size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("matrix tuple has {found} matrices, expected {expected}")]
    TupleLength { expected: usize, found: usize },

    #[error("direct sum of an empty list of tuples")]
    EmptyDirectSum,

    #[error("input already contains direction letters")]
    AlreadyDirectional,

    #[error("monomial {0} does not have the required direction bidegree")]
    WrongBidegree(Monomial),

    #[error("polynomial mixes analytic and antianalytic letters")]
    MixedLetters,

    #[error("polynomial is not a directional derivative")]
    NotADerivative,

    #[error("monomial {0} is not quadratic in the direction letters")]
    NotQuadraticInDirections(Monomial),

    #[error("polynomial or matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix entries contain direction letters")]
    DirectionLettersPresent,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid sample policy: {0}")]
    InvalidPolicy(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}
