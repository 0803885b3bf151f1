//! Bound s-states of the radial Klein-Gordon equation with mixed
//! scalar/vector couplings, split as ψ = χ·φ: χ carries the
//! non-relativistic dynamics, φ the relativistic correction. Closed forms
//! for the screened-Coulomb and Coulomb-plus-oscillator families, a
//! logarithmic perturbation engine for everything else, and an independent
//! finite-difference oracle to check it all against.

pub mod cli;
pub mod coulombic;
pub mod error;
pub mod grid;
pub mod hulthen;
pub mod oracle;
mod par;
pub mod perturb;
pub mod potentials;
pub mod riccati;

pub use error::{Error, Result};
