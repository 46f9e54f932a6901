use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("chain size {0} must be even and at least 4")]
    InvalidChainSize(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("negative time {0}")]
    NegativeTime(f64),

    #[error("time {t} precedes the second quench at T = {spend_time}")]
    BeforeSecondQuench { t: f64, spend_time: f64 },

    #[error("operation requires a {expected} quench protocol")]
    ProtocolKind { expected: &'static str },

    #[error("density matrix is not positive: eigenvalue {0:e}")]
    NotPositive(f64),

    #[error("{pairs} pair modes exceed the enumeration bound of {max}")]
    EnumerationTooLarge { pairs: usize, max: usize },

    #[error("exact diagonalization supports at most {max} sites, got {sites}")]
    TooManySites { sites: usize, max: usize },

    #[error("site {site} out of range for a chain of {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("invalid averaging window: {0}")]
    InvalidWindow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
