use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("order must be positive, got {0}")]
    NonPositiveOrder(f64),

    #[error("order {0} is not supported here; a finite order is required")]
    UnsupportedOrder(f64),

    #[error("entry {index} is {value}; measures need finite non-negative entries")]
    InvalidEntry { index: usize, value: f64 },

    #[error("entries sum to {sum}, which is not within {tolerance:e} of 1")]
    NotNormalized { sum: f64, tolerance: f64 },

    #[error("row {row}: {source}")]
    InvalidRow { row: usize, source: Box<Error> },

    #[error("measure has zero total mass")]
    ZeroMeasure,

    #[error("empty vector")]
    Empty,

    #[error("no input has finite divergence to the given output distribution")]
    EmptyAdmissibleSet,

    #[error("conditional divergence is infinite: input {input} has infinite divergence")]
    OutsideDomain { input: usize },

    #[error("divergence of order {order} is infinite")]
    InfiniteDivergence { order: f64 },

    #[error("tilting order {beta} is invalid for order {alpha}: need {requirement}")]
    TiltingOutOfRange {
        alpha: f64,
        beta: f64,
        requirement: &'static str,
    },

    #[error("output alphabet of size {size} is too large for exhaustive search (max {max})")]
    AlphabetTooLarge { size: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
