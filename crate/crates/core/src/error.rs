use std::io;

use thiserror::Error;

/// Errors produced anywhere in the engine.
#[derive(Debug, Error)]
pub enum HoloError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("geometry mismatch: {0}")]
    GeometryMismatch(String),

    #[error("invalid pupil: total illumination is zero")]
    ZeroIllumination,

    #[error("uniformity undefined: all spot intensities are zero")]
    UndefinedUniformity,

    #[error("spot {index} at ({x:.3e}, {y:.3e}) m lies outside the field of view (half-width {half_width:.3e} m)")]
    OutOfField {
        index: usize,
        x: f64,
        y: f64,
        half_width: f64,
    },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("malformed file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = HoloError> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> HoloError {
    HoloError::InvalidParameter(msg.into())
}
