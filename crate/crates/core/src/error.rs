use thiserror::Error;

use crate::equivalence::RepresentabilityReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("signal length must be at least 1")]
    Empty,

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("{divisor} does not divide {n}")]
    NonDivisor { n: usize, divisor: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} = {value} is out of range {range}")]
    OutOfRange {
        what: &'static str,
        value: String,
        range: String,
    },

    #[error("window correlation vanishes at index {index} (|value| = {magnitude:e})")]
    CorrelationVanishes { index: usize, magnitude: f64 },

    #[error("analysis window is not symmetric: g(N - {index}) != g({index})")]
    AsymmetricWindow { index: usize },

    #[error("time subsampling alpha = {0} breaks time invariance (alpha must be 1)")]
    TimeSubsampling(usize),

    #[error("filter is not representable on this lattice ({} violations)", .0.violation_count())]
    NotRepresentable(Box<RepresentabilityReport>),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
