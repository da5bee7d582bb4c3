use thiserror::Error;

/// Errors raised by ring operations, solvers and certificate checks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("elements or ideals come from different ring contexts")]
    MixedRings,
    #[error("operation not available for this ring: {0}")]
    WrongRing(String),
    #[error("ideal arithmetic not supported for {0}")]
    UnsupportedRing(String),
    #[error("ideals are not topologically co-maximal: {0}")]
    NotTcm(String),
    #[error("residue system is empty")]
    EmptySystem,
    #[error("division by zero")]
    ZeroDivisor,
    #[error("densification element is not contractive: V(1 - a) = {0} >= 1")]
    NotContractive(String),
    #[error("tolerance precondition violated: {0}")]
    ToleranceViolation(String),
    #[error("witness is not exact (bound {0})")]
    InexactWitness(String),
    #[error("witnesses do not share the same left ideal")]
    MismatchedI,
    #[error("interpolation points are not distinct")]
    DuplicatePoints,
    #[error("pole {0} is not strictly outside the disk")]
    PoleInsideDisk(String),
    #[error("point {0} is not strictly inside the disk")]
    DegenerateDisk(String),
    #[error("chain is not descending at index {0}")]
    NotDescending(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable tag, used by the CLI error payloads.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MixedRings => "MixedRings",
            Error::WrongRing(_) => "WrongRing",
            Error::UnsupportedRing(_) => "UnsupportedRing",
            Error::NotTcm(_) => "NotTCM",
            Error::EmptySystem => "EmptySystem",
            Error::ZeroDivisor => "ZeroDivisor",
            Error::NotContractive(_) => "NotContractive",
            Error::ToleranceViolation(_) => "ToleranceViolation",
            Error::InexactWitness(_) => "InexactWitness",
            Error::MismatchedI => "MismatchedI",
            Error::DuplicatePoints => "DuplicatePoints",
            Error::PoleInsideDisk(_) => "PoleInsideDisk",
            Error::DegenerateDisk(_) => "DegenerateDisk",
            Error::NotDescending(_) => "NotDescending",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
