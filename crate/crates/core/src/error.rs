use thiserror::Error;

use crate::MAX_BOUND;

#[derive(Debug, Error)]
pub enum Error {
    #[error("Q(sqrt({0})) is not an imaginary quadratic field of class number 1")]
    UnsupportedField(i64),

    #[error("zero is not a valid argument for {0}")]
    ZeroElement(&'static str),

    #[error("{0} is not a rational prime")]
    NotPrime(u64),

    #[error("{what} = {value} is out of range ({expected})")]
    OutOfRange {
        what: &'static str,
        value: String,
        expected: &'static str,
    },

    #[error("height bound {0} exceeds the supported maximum {MAX_BOUND}")]
    BoundTooLarge(u64),

    #[error("Ehrhart interpolation failed: {0}")]
    Interpolation(String),

    #[error("closed-form constant {closed_form:e} disagrees with general assembly {general:e}")]
    ConstantMismatch { closed_form: f64, general: f64 },

    #[error("malformed prime cache: {0}")]
    CacheFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
