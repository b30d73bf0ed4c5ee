use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: u64, order: u64 },

    #[error("invalid probability {0}")]
    InvalidProbability(f64),

    #[error("subset size {size} exceeds group order {order}")]
    SizeTooLarge { size: u64, order: u64 },

    #[error("empty set")]
    EmptySet,

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("map is not total on the set: no value for element {0}")]
    PartialMap(u32),

    #[error("quadruple set does not belong to the given set")]
    QuadrupleMismatch,

    #[error("mismatched target groups")]
    TargetMismatch,

    #[error("modulus must be at least 1")]
    InvalidModulus,

    #[error("solution count {count} exceeds enumeration cap {cap}")]
    CapExceeded { count: u128, cap: u128 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("M is undefined over an empty quadruple set")]
    EmptyQuadruples,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
