use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    EmptyGraph,

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("endpoint {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid weight {weight} on edge ({u}, {v})")]
    InvalidWeight { u: usize, v: usize, weight: f64 },

    #[error("vertex set is empty")]
    EmptyVertexSet,

    #[error("duplicate vertex {0} in vertex set")]
    DuplicateVertex(usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector is identically zero")]
    ZeroVector,

    #[error("vector must have unit infinity-norm, got {0}")]
    NotNormalized(f64),

    #[error("entry {index} of a bipartition must be -1 or +1, got {value}")]
    NotBipartition { index: usize, value: i8 },

    #[error("graph has no edge of positive weight")]
    NoPositiveWeight,

    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    OutOfDomain { name: &'static str, value: f64, lo: f64, hi: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("exhaustive search refused: {n} vertices exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },
}
