use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    Range { vertex: usize, n: usize },

    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("{what}: size {got} exceeds the limit of {limit}")]
    Scale {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by input exceeding a scale guard.
    pub fn is_scale(&self) -> bool {
        matches!(self, Error::Scale { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
