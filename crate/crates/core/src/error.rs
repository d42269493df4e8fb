use thiserror::Error;

use crate::hyperspace::BitString;

/// Largest noise-bit count the signal engine supports. The universe
/// amplitude reaches `2^M`, which must fit a signed 64-bit sample.
pub const MAX_NOISE_BITS: usize = 62;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InblError {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("trace length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("width mismatch: expected {expected} bits, found {found}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("noise-bit index {index} out of range 1..={width}")]
    IndexOutOfRange { index: usize, width: usize },

    #[error("trace is not a pure product state")]
    NoMatch,

    #[error("trace matches {} product states; window too short to separate them", .0.len())]
    Ambiguous(Vec<BitString>),

    #[error("superposition decode failed: {0}")]
    DecodeFailed(String),

    #[error("{what} limited to M <= {limit}, got {requested}")]
    ScaleExceeded {
        what: &'static str,
        limit: usize,
        requested: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, InblError>;
