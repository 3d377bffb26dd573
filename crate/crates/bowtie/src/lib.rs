//! Numerical toolkit for the quasi graph-additive functional equation
//! f(f(−x) + x) = f(−f(x)) + f(x).
//!
//! The crate constructs solutions from a prescribed negative branch, verifies
//! candidates by sup-norm residuals over grids, parametrizes positive
//! branches through Abel-equation conjugacies with periodic displacements,
//! and searches the parametrized families for counterexample candidates to
//! the homogeneity conjecture.

pub mod abel;
pub mod error;
pub mod explorer;
pub mod funcalg;
pub mod jsonspec;
pub mod solutions;
pub mod verify;

pub use error::{Error, Result};
