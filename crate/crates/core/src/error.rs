use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed PNG: {source}")]
    PngDecode {
        path: PathBuf,
        #[source]
        source: png::DecodingError,
    },

    #[error("{path}: PNG encoding failed: {source}")]
    PngEncode {
        path: PathBuf,
        #[source]
        source: png::EncodingError,
    },

    #[error("unsupported bit depth: {0} bits per channel (at most 8 supported)")]
    UnsupportedBitDepth(u8),

    #[error("invalid raster: {0}")]
    InvalidRaster(String),

    #[error("stereo frame width {0} is odd and cannot be split in two equal halves")]
    OddWidth(u32),

    #[error("crop window rows {top}..{bottom} exceeds scaled height {height}")]
    CropOutOfBounds { top: u32, bottom: u32, height: u32 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("image {width}x{height} is smaller than the coarsest pyramid level ({min}px)")]
    ImageTooSmall { width: u32, height: u32, min: u32 },

    #[error("wrong magic in flow file (got {0})")]
    FloMagic(f32),

    #[error("truncated {what}: expected {expected} bytes, found {found}")]
    Truncated {
        what: &'static str,
        expected: u64,
        found: u64,
    },

    #[error("invalid dimensions {width}x{height}")]
    InvalidDimensions { width: i64, height: i64 },

    #[error("morph parameter t={0} outside [0, 1]")]
    BlendOutOfRange(f64),

    #[error("view count {0} is below the minimum of 2")]
    TooFewViews(usize),

    #[error("quilt layout: {0}")]
    Layout(String),

    #[error("calibration: missing required field \"{0}\"")]
    MissingField(&'static str),

    #[error("calibration: field \"{field}\" is not a number")]
    NonNumeric { field: &'static str },

    #[error("calibration: {0}")]
    InvalidCalibration(String),

    #[error("calibration JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("bad LUT magic")]
    LutMagic,

    #[error("LUT entry ({qx}, {qy}) lies outside the {width}x{height} quilt")]
    LutOutOfBounds {
        qx: u16,
        qy: u16,
        width: u32,
        height: u32,
    },

    #[error("quilt {width}x{height} does not fit 16-bit LUT coordinates")]
    QuiltTooLarge { width: u32, height: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("GIF encoding: {0}")]
    Gif(#[from] gif::EncodingError),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
