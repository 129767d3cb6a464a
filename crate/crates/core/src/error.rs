//! Shared error type.

use thiserror::Error;

/// Errors produced by geometry, target-generation, extraction,
/// reconstruction, metric, and file-format operations.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A binary mask contained no foreground cells.
    #[error("mask has no foreground cells")]
    EmptyMask,

    /// A supervision band contained no active cells.
    #[error("supervision band is empty")]
    EmptyBand,

    /// Curve reconstruction could not produce a valid polyline.
    #[error("curve reconstruction failed: {0}")]
    ReconstructionFailed(String),

    /// A grid or scene file violated its format contract.
    #[error("format error: {0}")]
    Format(String),

    /// Underlying I/O failure while reading or writing a file.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
