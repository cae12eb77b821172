use std::path::PathBuf;

/// Errors produced anywhere in the inference pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid proposition id {id:?}: {reason}")]
    InvalidId { id: String, reason: &'static str },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),

    #[error("rating {0} is outside 0..=10")]
    InvalidRating(i64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph has {vertices} vertices, above the exact-solver limit of {limit}; use solve_heuristic instead")]
    TooLarge { vertices: usize, limit: usize },

    #[error("parse error at {field}: {message}")]
    Schema { field: String, message: String },

    #[error("ensemble invariant violated: {0}")]
    Ensemble(String),

    #[error("convergence diagnostic needs at least 3 samples, got {0}")]
    InsufficientSamples(usize),

    #[error("no bracketed edge list found in response")]
    UnparseableResponse,

    #[error("malformed edge list at byte {offset}: {message}")]
    MalformedEdgeList { offset: usize, message: String },

    #[error("label {0:?} is not one of the supplied propositions")]
    Vocabulary(String),

    #[error("could not parse proposition list: {message}")]
    Extraction { message: String, raw: String },

    #[error("provider error: {0}")]
    Provider(String),

    #[error("fixture {path}: {message}")]
    Fixture { path: PathBuf, message: String },

    #[error("every sample failed:\n{}", .diagnostics.join("\n"))]
    PipelineFailure {
        diagnostics: Vec<String>,
        /// True when every failure came from the provider rather than the
        /// response contents.
        provider_only: bool,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            field: field.into(),
            message: message.into(),
        }
    }
}
