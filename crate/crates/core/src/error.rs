use crate::opcore::Party;

/// Errors raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid subsystem signature: {0}")]
    InvalidSignature(String),

    #[error("unknown subsystem label {0:?}")]
    UnknownLabel(Party),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("no correction stored for Weyl element ({0}, {1})")]
    MissingCorrection(usize, usize),

    #[error("ensemble entry {0} has no simulation descriptor")]
    MissingDescriptor(usize),

    #[error("channel is not teleportation covariant over the correction search set")]
    NotCovariant,

    #[error("candidate state is not PPT (min partial-transpose eigenvalue {0:e})")]
    NotPpt(f64),

    #[error("REE chain violated: E_R(theta) = {e_theta} exceeds {sum_bound} + {tol:e}")]
    ChainViolation {
        e_theta: f64,
        sum_bound: f64,
        tol: f64,
    },

    #[error("ill-conditioned Gaussian state: {0}")]
    IllConditioned(String),

    #[error("Fock cutoff too small: trace deficit {0:e}")]
    TruncationDeficit(f64),

    #[error("unbounded: {0}")]
    Unbounded(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
