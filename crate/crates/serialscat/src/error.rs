use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate denominator in {0}")]
    Degenerate(&'static str),
    #[error("full reflection: transfer matrix undefined")]
    FullReflection,
    #[error("zero transmission: m22 vanishes")]
    ZeroTransmission,
    #[error("recursion denominator vanishes at step {0}")]
    RecursionSingular(usize),
    #[error("k^2 hits sphere eigenvalue l = {0}")]
    EigenvalueHit(usize),
    #[error("tooth integrator failed after {steps} steps: {msg}")]
    Integrator { steps: usize, msg: &'static str },
    #[error("singular linear system")]
    Singular,
    #[error("no sign change for root in interval l = {0}")]
    NoRoot(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
