use thiserror::Error;

/// Errors produced by kernel construction, regularization, and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid kernel parameters: m = {m} (need m >= 1)")]
    InvalidKernelSpec { m: usize },

    #[error("invalid scaling parameter epsilon = {0} (must be positive and finite)")]
    InvalidScaling(f64),

    #[error("exact moment system is singular")]
    SingularSystem,

    #[error("unsupported Newton-Cotes rule q = {0} (supported: 1..=8)")]
    UnsupportedRule(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid particle field: {0}")]
    InvalidParticles(String),

    #[error("oracle quadrature did not reach tolerance {tolerance:e} (estimate {estimate:e} after {intervals} intervals)")]
    OracleFailure {
        tolerance: f64,
        estimate: f64,
        intervals: usize,
    },

    #[error("degenerate domain [{a}, {b}]")]
    InvalidDomain { a: f64, b: f64 },

    #[error("solution blew up at t = {time}")]
    BlowUp { time: f64 },

    #[error("epsilon = {epsilon} leaves no interior particle region (half span {half_span})")]
    EmptyInterior { epsilon: f64, half_span: f64 },

    #[error("no collocation nodes in the requested region")]
    EmptyRegion,

    #[error("invalid data: {0}")]
    InvalidData(String),
}

impl Error {
    /// True for failures that arise while computing, as opposed to bad inputs.
    pub fn is_runtime(&self) -> bool {
        matches!(
            self,
            Error::BlowUp { .. } | Error::OracleFailure { .. } | Error::SingularSystem
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
