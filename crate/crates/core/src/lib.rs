//! Classification, construction, and numerical verification of Bertrand and
//! Mannheim mates — for regular space curves across all nine tangent /
//! principal-normal / bi-normal line pairings, and for framed curves (curves
//! with singular points carried by an orthonormal moving frame) across all
//! nine frame-vector pairings.
//!
//! The crate is organized as:
//!
//! - [`geom`]: 3-vector algebra, frame pairs, sampling grids
//! - [`expr`]: the expression DSL used by config files and fixtures
//! - [`diff`]: finite-difference stencils and cumulative quadrature
//! - [`frenet`]: Frenet apparatus, arc length, curve synthesis from
//!   prescribed curvature and torsion
//! - [`discrete`]: stencil-based apparatus from bare point samples (the
//!   independent verification path)
//! - [`bertrand`]: classifiers and mate constructions for regular curves
//! - [`framed`]: framed curves, frame ODE integration, curvature recovery
//! - [`bertrand_framed`]: classifiers and mate constructions for framed
//!   curves
//! - [`verify`]: seeded randomized verification batteries
//! - [`tol`]: the shared tolerance policy

pub mod bertrand;
pub mod bertrand_framed;
pub mod diff;
pub mod discrete;
pub mod expr;
pub mod fixtures;
pub mod framed;
pub mod frenet;
pub mod geom;
pub mod tol;
pub mod verify;

pub use expr::{CurveSpec, Expr};
pub use geom::{FramePair, Grid, Vec3};
pub use tol::Tolerances;
