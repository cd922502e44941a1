//! Error types shared across the library.

use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Error)]
pub enum DevoError {
    /// A parameter was outside its documented valid range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Input data violated an ordering or bounds contract.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A 3D point was at or behind the camera plane.
    #[error("point behind camera (z = {z})")]
    BehindCamera { z: f64 },

    /// A depth value was not strictly positive.
    #[error("non-positive depth (z = {z})")]
    InvalidDepth { z: f64 },

    /// The tracker could not produce a pose update.
    #[error("tracking lost: {0}")]
    TrackingLost(#[from] TrackingLost),

    /// Trajectory association / metric computation failed.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// File parsing failed.
    #[error("parse error in {path} at line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    /// Dataset-level validation failed (missing files, size mismatches).
    #[error("dataset error: {0}")]
    Dataset(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Reasons the pose solver can give up on a frame.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum TrackingLost {
    /// Fewer usable map points than the configured minimum.
    #[error("too few usable points ({available} < {required})")]
    TooFewPoints { available: usize, required: usize },

    /// Normal equations too ill-conditioned to trust an update.
    #[error("degenerate normal equations")]
    DegenerateNormalEquations,

    /// Every map point projected outside the field or behind the camera.
    #[error("all points excluded from the residual set")]
    AllPointsExcluded,
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, DevoError>;
