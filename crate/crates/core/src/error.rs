use thiserror::Error;

use crate::grassmann::Parity;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report. `name()` gives the stable
/// identifier printed by the CLI and `code()` the number used across the C ABI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("format mismatch: {0}")]
    FormatMismatch(String),

    #[error("generator index {index} outside 1..={n}")]
    GeneratorOutOfRange { index: usize, n: usize },

    #[error("element is inhomogeneous: parity undefined")]
    Inhomogeneous,

    #[error("parity violation: {0}")]
    ParityViolation(String),

    #[error("noninvertible: {0}")]
    Noninvertible(String),

    #[error("superstar requires an even generator count, got N = {0}")]
    UnsupportedConvention(usize),

    #[error("matrix of size {size} exceeds the determinant bound {bound}")]
    SizeBound { size: usize, bound: usize },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("state is not normalized: deviation {deviation:e} exceeds {tolerance:e}")]
    NotNormalized { deviation: f64, tolerance: f64 },

    #[error("zero vector is not a state")]
    ZeroState,

    #[error("supertangle undefined: x22 x22^# = {factor} is not invertible (rhs 4 f f^# = {rhs})")]
    UndefinedTangle { factor: String, rhs: String },

    #[error("wrong dimension: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("expected {expected} input, got {got}")]
    ParityMismatch { expected: Parity, got: Parity },

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("unknown sdTr arrangement id `{0}`")]
    UnknownArrangement(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::FormatMismatch(_) => "format-mismatch",
            Error::GeneratorOutOfRange { .. } => "generator-out-of-range",
            Error::Inhomogeneous => "inhomogeneous",
            Error::ParityViolation(_) => "parity-violation",
            Error::Noninvertible(_) => "noninvertible",
            Error::UnsupportedConvention(_) => "unsupported-convention",
            Error::SizeBound { .. } => "size-bound",
            Error::Numeric(_) => "numeric",
            Error::NotNormalized { .. } => "not-normalized",
            Error::ZeroState => "zero-state",
            Error::UndefinedTangle { .. } => "undefined-tangle",
            Error::Dimension { .. } => "wrong-dimension",
            Error::ParityMismatch { .. } => "parity-mismatch",
            Error::Calibration(_) => "calibration-failed",
            Error::UnknownArrangement(_) => "uncalibrated-arrangement",
            Error::Parse(_) => "parse",
        }
    }

    /// Stable numeric code, never zero.
    pub fn code(&self) -> i32 {
        match self {
            Error::FormatMismatch(_) => 1,
            Error::GeneratorOutOfRange { .. } => 2,
            Error::Inhomogeneous => 3,
            Error::ParityViolation(_) => 4,
            Error::Noninvertible(_) => 5,
            Error::UnsupportedConvention(_) => 6,
            Error::SizeBound { .. } => 7,
            Error::Numeric(_) => 8,
            Error::NotNormalized { .. } => 9,
            Error::ZeroState => 10,
            Error::UndefinedTangle { .. } => 11,
            Error::Dimension { .. } => 12,
            Error::ParityMismatch { .. } => 13,
            Error::Calibration(_) => 14,
            Error::UnknownArrangement(_) => 15,
            Error::Parse(_) => 16,
        }
    }

    /// Parse errors are input problems, everything else is a domain error.
    pub fn is_domain(&self) -> bool {
        !matches!(self, Error::Parse(_))
    }
}
