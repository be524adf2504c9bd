use thiserror::Error;

/// Every failure the library can report.
///
/// Each variant maps to a stable machine-readable kind via [`Error::kind`],
/// which the command-line front end writes into its JSON error record.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("time grid must be strictly increasing (t[{index}] = {value} after {previous})")]
    NonIncreasingGrid { index: usize, previous: f64, value: f64 },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("volatility must be positive and finite, got {0}")]
    NonPositiveVol(f64),

    #[error("spot price must be positive and finite, got {0}")]
    NonPositiveSpot(f64),

    #[error("strike must be positive and finite, got {0}")]
    NonPositiveStrike(f64),

    #[error("barrier level on step {step} must be positive and finite, got {value}")]
    NonPositiveLevel { step: usize, value: f64 },

    #[error("{what}: expected length {expected}, got {actual}")]
    LengthMismatch { what: &'static str, expected: usize, actual: usize },

    #[error("barrier direction does not match the contract ({0})")]
    BarrierDirectionMismatch(String),

    #[error("first-step barrier {level} is already breached by spot {spot}")]
    ImmediateKnock { level: f64, spot: f64 },

    #[error("reflection hypothesis violated for subset {subset}: {detail}")]
    HypothesisViolated { subset: String, detail: String },

    #[error("dimension {0} exceeds the supported maximum of {max}", max = crate::gaussian::MAX_DIM)]
    DimensionTooLarge(usize),

    #[error("correlation matrix is not positive semi-definite")]
    NotPsd,

    #[error("invalid correlation matrix: {0}")]
    InvalidCorrelation(String),

    #[error("barrier curve must be positive on [0, T], got {value} at t = {time}")]
    NonPositiveCurve { time: f64, value: f64 },

    #[error("reference price is zero at row {0}; relative error undefined")]
    ZeroReference(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable identifier for the failure class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonIncreasingGrid { .. } => "non_increasing_grid",
            Error::InvalidGrid(_) => "invalid_grid",
            Error::NonPositiveVol(_) => "non_positive_vol",
            Error::NonPositiveSpot(_) => "non_positive_spot",
            Error::NonPositiveStrike(_) => "non_positive_strike",
            Error::NonPositiveLevel { .. } => "non_positive_level",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::BarrierDirectionMismatch(_) => "barrier_direction_mismatch",
            Error::ImmediateKnock { .. } => "immediate_knock",
            Error::HypothesisViolated { .. } => "hypothesis_violated",
            Error::DimensionTooLarge(_) => "dimension_too_large",
            Error::NotPsd => "not_psd",
            Error::InvalidCorrelation(_) => "invalid_correlation",
            Error::NonPositiveCurve { .. } => "non_positive_curve",
            Error::ZeroReference(_) => "zero_reference",
            Error::InvalidConfig(_) => "invalid_config",
            Error::Scenario(_) => "scenario",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
