use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// `s < r`: the induced outgoing channel would not be completely positive.
    #[error("not completely positive: requires s >= r >= 0 (got r = {r}, s = {s})")]
    ParamsNotCompletelyPositive { r: f64, s: f64 },

    #[error("not completely positive: y = {y} < |tau - 1| = {} (tau = {tau})", (tau - 1.0).abs())]
    NotCompletelyPositive { tau: f64, y: f64 },

    #[error("noise matrix is not positive semidefinite (min eigenvalue {min_eig})")]
    NoiseNotPositive { min_eig: f64 },

    #[error("(tau, y) = ({tau}, {y}) lies outside the black hole strip")]
    NotInBlackHoleRegion { tau: f64, y: f64 },

    #[error("formula not defined for tau = {tau} (needs tau > 0)")]
    UnsupportedClass { tau: f64 },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("truncated Fock space of dimension {dim} exceeds the limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },
}
