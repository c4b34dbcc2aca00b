use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadrature did not converge after {refinements} refinements (last change {last_change:e}, target {target:e})")]
    NoConvergence {
        refinements: usize,
        last_change: f64,
        target: f64,
    },

    #[error("Re z = {re} lies outside the band ({lower}, {upper})")]
    BandViolation { re: f64, lower: f64, upper: f64 },

    #[error("invalid exponent sequence: {0}")]
    InvalidSpec(String),

    #[error("invalid weight family: {0}")]
    InvalidFamily(String),

    #[error("index {index} out of range (max {max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("no j <= {horizon} admits a complete witness table")]
    HorizonTooSmall { horizon: usize },

    #[error("exponents z[{first}] and z[{second}] are equal ({value})")]
    DuplicateExponent {
        first: usize,
        second: usize,
        value: String,
    },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("scaled system would overflow: {0}")]
    OverflowRisk(String),

    #[error("linear system is singular (condition estimate {condition:e})")]
    SingularSystem { condition: f64 },

    #[error("unknown {kind} '{name}' (available: {available})")]
    UnknownName {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error("parse error: {0}")]
    Parse(String),
}
