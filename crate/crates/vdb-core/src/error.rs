use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("word width {0} outside supported range 1..=16")]
    InvalidWidth(u8),
    #[error("value {value} does not fit in {width} bits")]
    ValueOutOfRange { value: u64, width: u8 },
    #[error("width mismatch: expected {expected}, got {actual}")]
    WidthMismatch { expected: u8, actual: u8 },
    #[error("error vectors overlap on bit mask {mask:#06x}")]
    OverlappingSupport { mask: u16 },
    #[error("materializing error sets for width {width} exceeds the limit of {limit}; use the counts-only form")]
    Capacity { width: u8, limit: u8 },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid probability: {0}")]
    InvalidProbability(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("inconsistent measurements: {0}")]
    InconsistentMeasurements(String),
    #[error("estimation failure: {0}")]
    EstimationFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
