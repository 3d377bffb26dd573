//! Representation and algebra of real functions: evaluation, inversion,
//! composition, conjugation by −id, commutators, displacement, and bow-tie
//! cone membership.

mod function;
mod grid;
mod interpolant;
mod interval;
mod report;

pub use function::{inverse_evaluate, Body, RealFunction};
pub use grid::{Grid, DOMAIN_MAX, DOMAIN_MIN, GRID_POINTS, RESIDUAL_MAX};
pub use interpolant::{
    Direction, ExtensionPolicy, MonotoneInterpolant, CLOSED_FORM_INVERSE_TOL,
    INTERPOLANT_INVERSE_TOL,
};
pub use interval::Interval;
pub use report::{
    commutator_residual, commutator_residual_traced, cone_check, residual_sweep, ConeInequality,
    ConeReport, ConeViolation, ResidualReport, TracePoint,
};
