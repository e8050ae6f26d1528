use alloc::string::String;

use crate::numerics::QuadError;

/// Errors raised by the analytic and simulation engines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {bound}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        bound: &'static str,
    },
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] QuadError),
    #[error("realization is already Palm-conditioned")]
    AlreadyConditioned,
    #[error(
        "{quantity} = {value} lies outside [0, 1] beyond 10x its error estimate {error_estimate}"
    )]
    OutOfRange {
        quantity: &'static str,
        value: f64,
        error_estimate: f64,
    },
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check(ok: bool, name: &'static str, value: f64, bound: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value, bound })
    }
}
