//! Estimation of a monotone decreasing probability mass function whose flat
//! regions have known lengths.
//!
//! Given i.i.d. draws from a nonincreasing pmf on `{1..k}` together with the
//! vector `w = (w_1, ..., w_m)` of flat-region lengths, the flat-aware maximum
//! likelihood estimator groups the counts by region, applies weighted
//! decreasing isotonic regression to the grouped frequencies, and expands the
//! result back to the full support. The crate also provides the empirical,
//! monotone-rearrangement and Grenander estimators for comparison, the
//! closed-form asymptotic covariance and limit-risk formulas, and a seeded
//! Monte Carlo engine for risk comparisons.
//!
//! Core numerics are generic over the scalar type via [`scalar::Real`]
//! (`f32` or `f64`); the aliases at the crate root fix `f64`, which is what
//! the simulation engine and the CLI use.

#![forbid(unsafe_code)]

pub mod asymptotics;
pub mod cli;
pub mod estimators;
pub mod isotonic;
pub mod metrics;
pub mod pmf;
pub mod report;
pub mod scalar;
pub mod simulate;

/// Double-precision probability vector.
pub type Pmf = pmf::PmfOf<f64>;
/// Double-precision grouped estimate.
pub type GroupedEstimate = pmf::GroupedEstimateOf<f64>;
/// Double-precision weighted sequence for isotonic regression.
pub type WeightedSeq = isotonic::WeightedSeqOf<f64>;
/// Double-precision covariance matrix.
pub type CovMatrix = asymptotics::CovMatrixOf<f64>;

/// Single-precision variants.
pub type Pmf32 = pmf::PmfOf<f32>;
pub type GroupedEstimate32 = pmf::GroupedEstimateOf<f32>;
pub type WeightedSeq32 = isotonic::WeightedSeqOf<f32>;
pub type CovMatrix32 = asymptotics::CovMatrixOf<f32>;

pub use pmf::{CountVector, FlatSpec};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid probability vector: {0}")]
    InvalidPmf(String),
    #[error("invalid flat-region lengths: {0}")]
    InvalidFlatSpec(String),
    #[error("invalid count vector: {0}")]
    InvalidCounts(String),
    #[error("invalid mixture: {0}")]
    InvalidMixture(String),
    #[error("invalid grouped estimate: {0}")]
    InvalidGrouped(String),
    #[error("empty input")]
    EmptyInput,
    #[error("pmf does not match the flat-region structure: {0}")]
    NotMonotoneWithFlats(String),
    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
