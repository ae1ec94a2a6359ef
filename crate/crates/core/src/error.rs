use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature hit its bisection depth limit.
    #[error(
        "quadrature did not reach tolerance {tol:e} on [{a}, {b}] (estimated error {estimate:e})"
    )]
    Quadrature {
        a: f64,
        b: f64,
        tol: f64,
        estimate: f64,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
