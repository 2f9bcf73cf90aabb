//! Numerical tolerances shared across the crate.
//!
//! All entropies are in bits. Eigenvalues in `[-TAU_PSD, 0]` are clamped to
//! zero before they reach a logarithm.

/// Hermiticity check on matrix entries.
pub const TAU_HERM: f64 = 1e-10;
/// Isometry / unitarity check, `U*U = I`.
pub const TAU_UNIT: f64 = 1e-10;
/// Smallest eigenvalue accepted as positive semidefinite.
pub const TAU_PSD: f64 = 1e-9;
/// Unit trace.
pub const TAU_TR: f64 = 1e-9;
/// Unit norm of state vectors.
pub const TAU_NORM: f64 = 1e-9;
/// Schmidt reconstruction error.
pub const TAU_RECON: f64 = 1e-10;
/// Slack allowed in entropic inequalities.
pub const TAU_ENT: f64 = 1e-7;
/// Eigenvalues below this are outside the support (relative entropy).
pub const SUPPORT_THRESHOLD: f64 = 1e-10;
/// Accuracy target for the capacity optimizer.
pub const TAU_OPT: f64 = 1e-3;
