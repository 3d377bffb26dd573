use crate::funcalg::Interval;

/// Errors shared across the toolkit.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("evaluation at x = {x} outside domain {domain}")]
    DomainViolation { x: f64, domain: Interval },

    #[error("non-finite value while evaluating {context} at x = {x}")]
    NonFinite { x: f64, context: &'static str },

    #[error("target y = {y} not bracketed by [{lo}, {hi}]")]
    NotBracketed { y: f64, lo: f64, hi: f64 },

    #[error("samples are not strictly monotone near index {index}")]
    NonMonotone { index: usize },

    #[error("orbit iteration cap of {cap} exceeded while evaluating at x = {x}")]
    IterationCap { x: f64, cap: usize },

    #[error("periodic function has period {found}, expected {expected}")]
    PeriodMismatch { expected: f64, found: f64 },

    #[error("grid evaluation failed at x = {x}: {source}")]
    GridPoint {
        x: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("malformed specification: {0}")]
    Spec(String),
}

impl Error {
    pub fn at_grid_point(self, x: f64) -> Error {
        Error::GridPoint {
            x,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
