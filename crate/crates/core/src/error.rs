use thiserror::Error;

use crate::params::ValidationError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TruncationError {
    #[error(
        "truncation leak: amplitude {amplitude:.3e} at top level {level} exceeds {tolerance:.1e}; increase nmax/kmax"
    )]
    Leak {
        level: usize,
        amplitude: f64,
        tolerance: f64,
    },
    #[error(
        "truncation insufficient: excluded probability {tail_bound:.3e} exceeds {tolerance:.1e} at cutoff {cutoff}; increase nmax/kmax"
    )]
    Insufficient {
        cutoff: usize,
        tail_bound: f64,
        tolerance: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Truncation(#[from] TruncationError),
}

pub type Result<T> = std::result::Result<T, Error>;
