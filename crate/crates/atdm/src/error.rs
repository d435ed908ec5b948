use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("Gamma argument {arg} is not positive at beta = {beta}")]
    NonPositiveGammaArgument { arg: String, beta: f64 },

    #[error("series did not converge within {terms} terms")]
    NoConvergence { terms: usize },

    #[error("singular evaluation: {0}")]
    SingularEvaluation(String),

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("forward transform needs a non-negative integer t-power, got t^({0})")]
    NonIntegerExponent(String),

    #[error("inverse transform needs s-power >= 2 on (0,1], got s^({0})")]
    InvalidSPower(String),

    #[error("derivative rule of order {order} needs {order} initial series, got {given}")]
    MissingInitialData { order: usize, given: usize },

    #[error("need {needed} components, only {available} supplied")]
    InsufficientComponents { needed: usize, available: usize },

    #[error("component {component} left the admissible domain: {detail}")]
    DivergentComponent { component: usize, detail: String },

    #[error("no truncation order reaches deviation below {threshold:e} (best N = {best_n}, deviation {best_deviation:e})")]
    NoCalibration { threshold: f64, best_n: usize, best_deviation: f64 },

    #[error("invalid problem specification: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}
