//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("invalid skeleton: {0}")]
    InvalidSkeleton(String),

    #[error("degenerate dual-quaternion blend at vertex {vertex}: |real| = {norm}")]
    DegenerateBlend { vertex: usize, norm: f64 },

    #[error("point behind camera (depth {depth})")]
    BehindCamera { depth: f64 },

    #[error("mask has no silhouette boundary (all-empty or all-full)")]
    NoBoundary,

    #[error("embedded graph construction: {0}")]
    GraphConstruction(String),

    #[error("empty point set passed to {0}")]
    EmptyPointSet(&'static str),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("non-finite objective encountered in stage `{stage}` at iteration {iteration}")]
    NonFiniteObjective { stage: String, iteration: usize },

    #[error("registration: {0}")]
    Registration(String),

    #[error("asset format error at byte offset {offset}: {message}")]
    AssetFormat { offset: u64, message: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
