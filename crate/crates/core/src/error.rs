use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("grade mismatch: expected {expected}, found {found}")]
    GradeMismatch { expected: usize, found: usize },
    #[error("grade overflow: {0} + {1} exceeds ambient dimension {2}")]
    GradeOverflow(usize, usize, usize),
    #[error("cannot normalize: coefficient sum is zero")]
    Normalization,
    #[error("matrix has rank {rank}, expected {expected}")]
    Rank { rank: usize, expected: usize },
    #[error("multivector is not decomposable")]
    NotDecomposable,
    #[error("containment violated: {0}")]
    Containment(String),
    #[error("epsilon search exhausted after {0} iterations")]
    EpsilonExhausted(usize),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("polytope is empty")]
    Empty,
    #[error("polytope is not full-dimensional")]
    Degenerate,
    #[error("point outside domain: {0}")]
    Domain(String),
    #[error("ray membership is not an interval along direction {0:?}")]
    StarConvexityViolation(Vec<f64>),
    #[error("bottom identification mismatch: {0}")]
    Gluing(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
