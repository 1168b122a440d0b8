//! A numerical laboratory for isometrically immersing negatively curved
//! two-dimensional metrics into three-dimensional Euclidean space.
//!
//! The compatibility system tying a metric to the second fundamental form of
//! an immersion is recast, after scaling by √(−κ), as a steady compressible
//! flow with a Chaplygin-type pressure law. This crate marches that system in
//! one coordinate direction with artificial viscosity, monitors the invariant
//! region and energy bounds that underwrite convergence of the vanishing-
//! viscosity limit, checks candidate solutions against the weak form of the
//! equations, and integrates the resulting immersion frame to produce a
//! surface mesh.
//!
//! Module map:
//! - [`metric`]: metric families, curvature, Christoffel symbols.
//! - [`fluid`]: the change of variables between second-form and flow states.
//! - [`solver`]: the viscous parabolic marching scheme.
//! - [`verify`]: weak-form residuals, invariant-region and energy diagnostics.
//! - [`reconstruct`]: frame integration and mesh export.
//! - [`grid`]: shared finite-difference and quadrature helpers.

pub mod error;
pub mod fluid;
pub mod grid;
pub mod metric;
pub mod reconstruct;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
