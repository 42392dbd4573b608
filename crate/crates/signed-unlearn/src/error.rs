//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by graph loading, model fitting, and the unlearning
/// pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: malformed line: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("input produced an empty graph")]
    EmptyGraph,

    #[error("unknown node id {0}")]
    UnknownNode(u32),

    #[error("edge ({0}, {1}) is not in the graph")]
    UnknownEdge(u32, u32),

    #[error("invalid deletion request: {0}")]
    InvalidRequest(String),

    #[error("certification region is empty")]
    EmptyRegion,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("training did not converge within {epochs} epochs (gradient norm {grad_norm:.3e})")]
    NonConvergence { epochs: usize, grad_norm: f64 },

    #[error("conjugate gradient failed: {0}")]
    SolverFailure(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sample pool too small: requested {requested}, available {available}")]
    PoolTooSmall { requested: usize, available: usize },

    #[error("non-member pair ({0}, {1}) is an existing edge")]
    NonMemberIsEdge(u32, u32),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
