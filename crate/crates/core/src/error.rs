use thiserror::Error;

use crate::exprlang::{EvalError, ParseError};
use crate::quadrature::QuadratureError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("{name} = {value} is out of range: require {bound}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        bound: String,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("invalid grid function: {0}")]
    Grid(String),
    #[error("invalid solver settings: {0}")]
    Settings(String),
    #[error("no finite samples of f(u)/u near {0}")]
    NoSamples(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
