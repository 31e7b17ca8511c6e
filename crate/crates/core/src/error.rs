//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the analysis operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A point or target grid falls outside the source grid hull; no
    /// extrapolation is performed.
    #[error("domain coverage: {0}")]
    DomainCoverage(String),

    /// Two inputs that must share a grid, time axis, or provenance do not.
    #[error("alignment: {0}")]
    Alignment(String),

    /// Input data violated a schema or range invariant.
    #[error("validation: {0}")]
    Validation(String),

    /// Not enough data points to carry out the operation.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A series was constant where variance is required.
    #[error("zero variance: {0}")]
    ZeroVariance(String),

    /// An ensemble statistic was requested over zero members.
    #[error("empty ensemble")]
    EmptyEnsemble,

    /// Order-statistic rank exceeds the member count.
    #[error("rank {k} out of range for ensemble of {n}")]
    RankOutOfRange { k: usize, n: usize },

    /// Growth rate is undefined (base-year population is zero).
    #[error("undefined growth rate: {0}")]
    UndefinedRate(String),

    /// A compound projection rate below -100%/yr.
    #[error("invalid rate: {0}")]
    InvalidRate(String),

    /// National reference population must be positive.
    #[error("invalid reference: {0}")]
    InvalidReference(String),

    /// Stream temperature leaves no allowable rise; required withdrawal is
    /// unbounded and the plant must shut down.
    #[error("thermal shutdown: no allowable temperature rise at the intake")]
    ThermalShutdown,

    /// A linear system was singular or the solve did not meet its residual
    /// bound; try a larger 1/gamma (stronger regularization).
    #[error("conditioning: {0}")]
    Conditioning(String),

    /// Feature dimensions do not match between fit and predict.
    #[error("shape: {0}")]
    Shape(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
