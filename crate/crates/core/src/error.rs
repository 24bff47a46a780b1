use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} = {value} is outside the supported range [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: u64,
        min: u64,
        max: u64,
    },

    #[error("cannot allocate {bytes} bytes for {what}")]
    Resource { what: &'static str, bytes: u64 },

    #[error("s = {sigma}{t:+}i is a pole")]
    Pole { sigma: f64, t: f64 },

    #[error("s = {sigma}{t:+}i is outside the domain of {what}")]
    Domain {
        what: &'static str,
        sigma: f64,
        t: f64,
    },

    #[error("tolerance {tol:e} not reached after {terms} terms (achieved bound {achieved:e})")]
    Convergence {
        tol: f64,
        terms: usize,
        achieved: f64,
    },

    #[error("Euler factor at p = {prime} has magnitude {magnitude:e}")]
    DegenerateFactor { prime: u64, magnitude: f64 },

    #[error("insufficient data: {got} usable points, need at least {needed}")]
    InsufficientData { got: usize, needed: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(what: &'static str, value: u64, min: u64, max: u64) -> Result<()> {
    if value < min || value > max {
        return Err(Error::OutOfRange {
            what,
            value,
            min,
            max,
        });
    }
    Ok(())
}
