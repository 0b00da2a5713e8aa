use thiserror::Error;

/// Errors shared by every geometric operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coordinate {coord} exceeds space dimension {dim}")]
    OutOfDimension { coord: u32, dim: usize },
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("simplex pivoting degenerated: {0}")]
    Numerical(String),
    #[error("slice is empty")]
    EmptySlice,
    #[error("space has no finite vertex representation")]
    NotPolyhedral,
    #[error("point is not on the unit sphere (norm {0})")]
    NotOnSphere(f64),
    #[error("functional lies outside the dual unit ball (norm {0})")]
    NotInBall(f64),
    #[error("first dual coordinate must be nonnegative; negate the input first")]
    NegativeFirstCoordinate,
    #[error("bad witness index {0}")]
    BadIndex(u32),
    #[error("witness search exhausted after {0} samples")]
    SearchExhausted(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
