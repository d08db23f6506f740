use thiserror::Error;

/// Errors produced by graph operations, constructions and the CLI plumbing.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty graph")]
    EmptyGraph,
    #[error("empty vertex set")]
    EmptySet,
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("sets overlap at vertex {0}")]
    Overlap(usize),
    #[error("set not connected")]
    NotConnected,
    #[error("vertex {0} not in domain")]
    NotInDomain(usize),
    #[error("m = {0} is too small: log log m is undefined or negative")]
    TooSmall(usize),
    #[error("not a violating set: |N(S)| = {neighbors}, |S| = {size}, gamma = {gamma}")]
    NotViolating {
        neighbors: usize,
        size: usize,
        gamma: f64,
    },
    #[error("graph exhausted: {0}")]
    GraphExhausted(String),
    #[error("construction stalled at stage {stage}: {detail}")]
    Stalled { stage: String, detail: String },
    #[error("limits exceeded: {0}")]
    LimitExceeded(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn stalled(stage: impl ToString, detail: impl ToString) -> Self {
        Error::Stalled {
            stage: stage.to_string(),
            detail: detail.to_string(),
        }
    }
}
