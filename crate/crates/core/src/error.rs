use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the library. Degenerate configurations (points closer
/// than the minimum separation) are kept distinct from ordinary argument and
/// schema errors so callers can map them to different exit statuses.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degree mismatch: left operand has degree {left}, right has degree {right}")]
    DegreeMismatch { left: usize, right: usize },

    /// Point indices are 1-based in messages, matching configuration labels.
    #[error("degenerate configuration: points {i} and {j} are separated by {sep:.3e} (< {min:.1e})")]
    DegenerateConfiguration { i: usize, j: usize, sep: f64, min: f64 },

    #[error("point {index} has norm {norm:.6} but must lie strictly inside the unit ball")]
    PointOutsideBall { index: usize, norm: f64 },

    #[error("hopf map input is not on the unit 3-sphere: |u|^2 + |v|^2 = {norm_sq:.12}")]
    NonUnitLift { norm_sq: f64 },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn schema(msg: impl Into<String>) -> Self {
        Error::Schema(msg.into())
    }

    /// True for errors that indicate a degenerate (near-coincident) input
    /// configuration rather than a malformed request.
    pub fn is_degenerate(&self) -> bool {
        matches!(self, Error::DegenerateConfiguration { .. })
    }
}
