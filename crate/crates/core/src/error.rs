use thiserror::Error;

/// Errors raised by the spectrum, growth-rate and simulation routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Inputs violate a documented precondition.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// The argument lies outside the domain on which the quantity exists.
    #[error("domain error: {0}")]
    Domain(String),
    /// The request would exceed a configured size cap.
    #[error("capacity error: {0}")]
    Capacity(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
