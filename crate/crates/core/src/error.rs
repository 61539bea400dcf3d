use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("image must be at least 16x16 pixels, got {width}x{height}")]
    ImageTooSmallForInput { width: usize, height: usize },
    #[error("pixel buffer holds {actual} pixels, expected {expected}")]
    PixelCount { expected: usize, actual: usize },
    #[error("image too small for requested superpixel count")]
    ImageTooSmall,
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("dimension mismatch: {left_w}x{left_h} vs {right_w}x{right_h}")]
    DimensionMismatch {
        left_w: usize,
        left_h: usize,
        right_w: usize,
        right_h: usize,
    },
    #[error("edge map value {0} outside [0, 1]")]
    EdgeValueOutOfRange(f64),
    #[error("no seeds")]
    NoSeeds,
    #[error("seed index {index} out of range for {count} superpixels")]
    SeedOutOfRange { index: usize, count: usize },
    #[error("objectness/superpixel mismatch")]
    ObjectnessMismatch,
    #[error("EMR solve failed: residual {residual:e} after {iterations} sweeps")]
    SolveFailed { residual: f64, iterations: usize },
    #[error("config error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Decode {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },
    #[error("{0}")]
    Dataset(String),
}

pub type Result<T> = std::result::Result<T, Error>;
