use thiserror::Error;

use crate::params::HalfExponent;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter {0} must be nonzero")]
    ZeroParameter(&'static str),
    #[error("q - q^-1 vanishes (s^4 = 1)")]
    DegenerateQ,
    #[error("q-number [{0}] vanishes at this point")]
    NonGeneric(HalfExponent),
    #[error("no generic point found within {0} draws")]
    RetryBudget(usize),
    #[error("singular argument: {0}")]
    Singular(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
