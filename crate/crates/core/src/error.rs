use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("state is not normalized: squared norm {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },
    #[error("coupling rate must be finite and positive, got {0}")]
    InvalidCoupling(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("density matrix trace is {trace}, expected 1")]
    BadTrace { trace: f64 },
    #[error("density matrix has eigenvalue {eigenvalue:e} below the PSD tolerance")]
    NotPositive { eigenvalue: f64 },
    #[error("state has amplitude outside the null AB subspace")]
    NotFactorizable,
    #[error("post-selected outcome is impossible (probability {probability:e})")]
    ImpossibleOutcome { probability: f64 },
    #[error("concurrence {0} has no sudden death before the swap time")]
    NoSuddenDeath(f64),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
