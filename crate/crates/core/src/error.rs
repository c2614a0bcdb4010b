use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument lies on a pole of the gamma function.
    #[error("gamma function pole at z = {0}")]
    Pole(f64),

    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative or quadrature scheme did not reach its tolerance.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// Asymptotic fit could not be carried out on the requested range.
    #[error("fit failure: {0}")]
    Fit(String),

    /// A negative `nu` was requested without an explicit positivity waiver.
    #[error("nu = {0} < 0 gives a non-positive weight; an explicit positivity waiver is required")]
    PositivityWaiver(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
