use thiserror::Error;

/// Errors raised by circuit construction and the numeric engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-positive component value: {0}")]
    NonPositiveValue(f64),

    #[error("{op} needs at least {min} parts, got {got}")]
    Arity {
        op: &'static str,
        min: usize,
        got: usize,
    },

    #[error("expected {expected} at stage {stage}, found {found}")]
    ComponentKind {
        stage: usize,
        expected: &'static str,
        found: &'static str,
    },

    #[error("inertance admittance is undefined at zero frequency")]
    ZeroFrequency,

    #[error("non-finite intermediate value in {0}")]
    Overflow(&'static str),

    #[error("degenerate continued fraction: near-zero tail at entry {0}")]
    DegenerateFraction(usize),

    #[error("series combination with an identically zero admittance")]
    SingularSeries,

    #[error("denominator vanishes at the evaluation point")]
    Pole,

    #[error("ladder depth {0} overflows the geometric decorations")]
    Depth(usize),

    #[error("need at least {needed} samples inside the fit window, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("invalid parameter {name}: {reason}")]
    Parameter { name: &'static str, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parameter(name: &'static str, reason: impl Into<String>) -> Error {
    Error::Parameter {
        name,
        reason: reason.into(),
    }
}
