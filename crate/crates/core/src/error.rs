use thiserror::Error;

use crate::lattice::SurfaceModel;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("class belongs to {got}, expected {expected}")]
    ModelMismatch {
        expected: SurfaceModel,
        got: SurfaceModel,
    },

    #[error("no bilinear pairing on {0}; use top_intersection")]
    UnsupportedPairing(SurfaceModel),

    #[error("unsupported model for this operation: {0}")]
    UnsupportedModel(SurfaceModel),

    #[error("expected {expected} classes, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("rank {r} out of range {min}..={max}")]
    RankOutOfRange { r: usize, min: usize, max: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("parse error: {0}")]
    Parse(String),
}
