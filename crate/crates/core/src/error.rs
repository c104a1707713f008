use thiserror::Error;

use crate::group::GroupId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("group mismatch: {left} element combined with {right} element")]
    GroupMismatch { left: GroupId, right: GroupId },
    #[error("{group} element needs {expected} coordinates, got {got}")]
    WrongDimension { group: GroupId, expected: usize, got: usize },
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("dilation factor must be positive, got {0}")]
    NonPositiveDilation(String),
    #[error("degenerate dual point: {constraint}")]
    DegenerateDualPoint { constraint: String },
    #[error("shift {shift} is not a multiple of the grid step {step}; nearest admissible shift is {nearest}")]
    MisalignedShift { shift: f64, step: f64, nearest: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("dual region requires s > 1, got {0}")]
    InvalidRegion(f64),
    #[error("invalid exponent pair (p, q) = ({p}, {q}): need 1 < p <= 2 <= q < inf")]
    InvalidExponentPair { p: f64, q: f64 },
    #[error("invalid multiplier function: {0}")]
    InvalidPhi(String),
    #[error("invalid s-grid: {0}")]
    InvalidSGrid(String),
    #[error("no growth fit supplied")]
    MissingFit,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("evaluation failed at dual point {point}: {source}")]
    AtDualPoint {
        point: String,
        #[source]
        source: Box<Error>,
    },
}
