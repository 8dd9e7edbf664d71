use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    #[error("invalid step function: {0}")]
    InvalidStep(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("exact synthesis cap exceeded: n = {n} > cap = {cap}; use sample_monte_carlo")]
    ExactCapExceeded { n: usize, cap: usize },

    #[error("oracle size cap exceeded: size = {size} > cap = {cap}")]
    OracleCapExceeded { size: usize, cap: usize },

    #[error("bracketing failed in {context}")]
    BracketFailed { context: &'static str },

    #[error("inadmissible lattice parameter: {0}")]
    InadmissibleLattice(String),

    #[error("function outside required class: {0}")]
    InvalidFunctionClass(String),

    #[error("config error: field `{field}`: {message}")]
    Config { field: &'static str, message: String },

    #[error("i/o error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
