use thiserror::Error;

/// Errors raised by measure evaluation, level-set extraction and quadrature.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval [{lo}, {hi}): endpoints must satisfy 0 <= lo <= hi <= 1")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("index {index} out of range for a space of {size} points")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("set domain {found} does not match measure domain {expected}")]
    DomainMismatch { expected: String, found: String },

    #[error("destructive-pairs offset {0} outside [1/2, 1]")]
    InvalidOffset(f64),

    #[error("invalid measure parameters: {0}")]
    InvalidMeasure(String),

    #[error("sets are not pairwise disjoint")]
    NotDisjoint,

    #[error("simple function supports overlap")]
    OverlappingSupports,

    #[error("simple function supports do not cover the space (covered length {covered})")]
    IncompleteCover { covered: f64 },

    #[error("segment {segment} on [{lo}, {hi}) is not monotone as tagged")]
    NonMonotone { segment: usize, lo: f64, hi: f64 },

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("transform `{0}` is not strictly increasing on the range of f")]
    NonIncreasingTransform(String),

    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound}")]
    Quadrature { estimate: f64, error_bound: f64 },

    #[error("restricted integral paths disagree: {direct} vs {restricted_measure}")]
    PathMismatch {
        direct: f64,
        restricted_measure: f64,
    },

    #[error("unknown case id `{0}`")]
    UnknownCase(String),

    #[error("parameters outside validity region of `{0}`")]
    OutsideValidity(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
