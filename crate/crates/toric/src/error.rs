//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by geometric and arithmetic operations.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("zero vector has no primitive direction")]
    ZeroVector,

    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("empty input")]
    EmptyInput,

    #[error("points do not span the ambient dimension {expected} (affine rank {got})")]
    NotFullDimensional { expected: usize, got: usize },

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),

    #[error("origin is not an interior point of the polytope")]
    OriginNotInterior,

    #[error("face is not a facet")]
    NotAFacet,

    #[error("polytope is not canonical Fano")]
    NotCanonicalFano,

    #[error("cone is not simplicial")]
    NotSimplicial,

    #[error("polygon is not an LDP-polygon")]
    NotLdpPolygon,

    #[error("polytope is not almost pseudoreflexive")]
    NotAlmostPseudoreflexive,

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("parse error at line {line}: {message}")]
    ParseError { line: usize, message: String },

    #[error("empty check set")]
    EmptyCheckSet,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
