use thiserror::Error;

use crate::complex::{Face, VertexId};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("vertex {0} is not in the complex")]
    UnknownVertex(VertexId),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{0:?} is not a facet")]
    NotAFacet(Vec<VertexId>),

    #[error("invalid bijection: {0}")]
    InvalidBijection(String),

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("not a closed {expected}-manifold: {reason}")]
    NotClosedManifold { expected: String, reason: String },

    #[error("column mismatch: {0} vs {1}")]
    ColumnMismatch(usize, usize),

    #[error("index {index} out of range 0..={max}")]
    OutOfRange { index: usize, max: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} vertices exceed the brute-force cap of {1}; pass the exponential override to proceed")]
    TooManyVertices(usize, usize),

    #[error("facets {0:?} and {1:?} intersect")]
    FacetsIntersect(Vec<VertexId>, Vec<VertexId>),

    #[error("inadmissible handle: {0}")]
    Inadmissible(String),

    #[error("k = {0} is inadmissible: 80k+1 is not a perfect square")]
    InadmissibleK(u64),

    #[error("not a cycle: {0}")]
    NotACycle(String),

    #[error("hypothesis violated: induced {len}-cycle {cycle:?} has length = 1 mod 3")]
    ForbiddenCycle { cycle: Vec<VertexId>, len: usize },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("certificate replay failed: {0}")]
    Replay(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn not_manifold(dim: usize, reason: impl Into<String>) -> Self {
        Error::NotClosedManifold { expected: dim.to_string(), reason: reason.into() }
    }

    pub(crate) fn not_facet(face: &Face) -> Self {
        Error::NotAFacet(face.vertices().to_vec())
    }
}
