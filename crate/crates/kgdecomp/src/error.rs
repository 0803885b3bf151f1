//! Crate-wide error type. Variant names double as the machine-readable
//! error identifiers surfaced by the CLI.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("radius must be positive, got r = {0}")]
    NonPositiveRadius(f64),
    #[error("r = {r} lies outside the sampled range [{min}, {max}]")]
    OutOfGridRange { r: f64, min: f64, max: f64 },
    #[error("non-finite value encountered at r = {0}")]
    NonFiniteValue(f64),
    #[error("sample lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("exponent {0} exceeds the floating-point range (non-normalizable superpotential)")]
    Overflow(f64),
    #[error("no bound state: {0}")]
    NoBoundState(String),
    #[error("vector coupling dominates scalar: s0^2 = {s0_sq} < v0^2 = {v0_sq}")]
    VectorDominates { s0_sq: f64, v0_sq: f64 },
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("oscillator strength m*s2 + E*v2 = {0} does not confine")]
    NegativeOscillator(f64),
    #[error("parameter constraint violated: residual = {0}")]
    ConstraintViolated(f64),
    #[error("base state not normalizable on the grid: {0}")]
    NonNormalizableBase(String),
    #[error("m^2 + lambda = {0} < 0: no bound state at this potential strength")]
    ComplexEnergy(f64),
    #[error("potential not finite at r = {0}")]
    NonFinitePotential(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable identifier for the CLI's stderr JSON.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonPositiveRadius(_) => "NonPositiveRadius",
            Error::OutOfGridRange { .. } => "OutOfGridRange",
            Error::NonFiniteValue(_) => "NonFiniteValue",
            Error::LengthMismatch(_, _) => "LengthMismatch",
            Error::Overflow(_) => "Overflow",
            Error::NoBoundState(_) => "NoBoundState",
            Error::VectorDominates { .. } => "VectorDominates",
            Error::NoConvergence(_) => "NoConvergence",
            Error::NegativeOscillator(_) => "NegativeOscillator",
            Error::ConstraintViolated(_) => "ConstraintViolated",
            Error::NonNormalizableBase(_) => "NonNormalizableBase",
            Error::ComplexEnergy(_) => "ComplexEnergy",
            Error::NonFinitePotential(_) => "NonFinitePotential",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::Io(_) => "Io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
