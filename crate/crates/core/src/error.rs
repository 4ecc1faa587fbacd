use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex id must be non-empty")]
    EmptyVertexId,
    #[error("vertex id {0:?} contains a forbidden character (comma or control)")]
    InvalidVertexId(String),
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("self-loop on vertex {0:?}")]
    SelfLoop(String),
    #[error("unknown edge {0}--{1}")]
    UnknownEdge(String, String),
    #[error("interaction timestamp {0} is negative")]
    NegativeTimestamp(i64),
    #[error("interaction timestamp {0} is outside the representable date range")]
    TimestampOutOfRange(i64),

    #[error("adjacency matrix is not symmetric at ({0}, {1})")]
    AsymmetricMatrix(String, String),
    #[error("adjacency matrix has a nonzero diagonal entry at {0:?}")]
    NonzeroDiagonal(String),
    #[error("adjacency matrix shape error: {0}")]
    MatrixShape(String),
    #[error("duplicate weight entry for edge {0}--{1}")]
    DuplicateWeight(String, String),
    #[error("weight entry references edge {0}--{1} which is not in the graph")]
    WeightOnMissingEdge(String, String),

    #[error("frequency vectors differ in length: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("correlation is undefined: a vector has zero variance")]
    UndefinedCorrelation,
    #[error("invalid context key {0:?}: {1}")]
    InvalidKey(String, String),
    #[error("unknown context key {0:?}: it does not occur anywhere in the corpus")]
    UnknownContextKey(String),
    #[error("no context keys supplied")]
    NoKeys,
    #[error("invalid time bins: {0}")]
    InvalidBins(String),
    #[error("invalid detection config: {0}")]
    InvalidConfig(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("graph document error: {0}")]
    Document(String),
    #[error("invalid generator params: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
