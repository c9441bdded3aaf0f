//! Tolerance constants shared by every check in the crate.
//!
//! Family residuals are kept at least an order of magnitude below the
//! tolerances used for hypothesis and chain checks
//! (see `hypothesis::recommended_tol`).

/// Default admissibility tolerance, relative to `max(1, radius^2)`.
pub const HYPOTHESIS_TOL: f64 = 1e-10;

/// Orthonormality tolerance for families built in exact arithmetic
/// (canonical bases, Gram–Schmidt output).
pub const EXACT_FAMILY_TOL: f64 = 1e-10;

/// Orthonormality tolerance for families sampled on a quadrature grid.
pub const QUADRATURE_FAMILY_TOL: f64 = 1e-8;

/// Relative tolerance for inequality chains, against the largest magnitude
/// in the chain.
pub const CHAIN_REL_TOL: f64 = 1e-9;

/// Absolute floor for inequality chains.
pub const CHAIN_ABS_FLOOR: f64 = 1e-12;

/// Factor by which hypothesis checks exceed a family's Gram residual.
pub const FAMILY_RESIDUAL_MARGIN: f64 = 10.0;
