use num_complex::Complex64;
use thiserror::Error;

use crate::quadrature::QuadratureResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Evaluation of a permittivity model produced `Im ε < 0`.
    #[error("active medium: Im eps = {im} < 0 at omega = {omega}")]
    ActiveMedium { omega: f64, im: f64 },

    #[error("frequency {omega} outside tabulated range [{min}, {max}]")]
    OutOfRange { omega: f64, min: f64, max: f64 },

    #[error("quadrature did not converge (estimate {best:?})")]
    NoConvergence { best: QuadratureResult },

    /// A denominator vanished: a genuine resonance of the lossless problem.
    #[error("pole: {what} (size = {size}, n = {n})")]
    Pole {
        what: &'static str,
        size: f64,
        n: Complex64,
    },

    #[error("table parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be finite, got {value}")))
    }
}

pub(crate) fn ensure_finite_complex(name: &str, value: Complex64) -> Result<()> {
    if value.re.is_finite() && value.im.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be finite, got {value}")))
    }
}
