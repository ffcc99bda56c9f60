use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the ordering engine and its I/O helpers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("pattern is not structurally symmetric: ({row}, {col}) present without its transpose")]
    AsymmetricPattern { row: usize, col: usize },

    #[error("index {index} out of bounds (limit {bound})")]
    IndexOutOfBounds { index: usize, bound: usize },

    #[error("malformed pattern: {0}")]
    MalformedPattern(String),

    #[error("{n} rows are not divisible by dim {dim}")]
    DimMismatch { n: usize, dim: usize },

    #[error("invalid node map: {0}")]
    InvalidMap(String),

    #[error("region does not match the node sets stored under tree index {root}")]
    RegionMismatch { root: usize },

    #[error("tree is stale with respect to the graph: {0}")]
    StaleTree(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("matrix is not positive definite (pivot {pivot} at column {column})")]
    NotPositiveDefinite { column: usize, pivot: f64 },

    #[error("ball around node {center} holds {size} node(s); at least 2 required")]
    BallTooSmall { center: usize, size: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid manifest entry: {0}")]
    InvalidManifest(String),

    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(
        path: impl Into<PathBuf>,
        line: usize,
        column: usize,
        message: impl Into<String>,
    ) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            column,
            message: message.into(),
        }
    }
}
