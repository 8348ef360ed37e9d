//! Nodal geometry of two-term superpositions of eigenfunctions of the 2D
//! isotropic quantum harmonic oscillator `-Δ + x² + y²`.
//!
//! The crate is organised bottom-up:
//!
//! - [`hermite`]: stable Hermite polynomial evaluation, zeros, norms.
//! - [`oscillator`]: product eigenfunctions and the family
//!   `Φ^θ_n = cos θ φ_{n,0} + sin θ φ_{0,n}`.
//! - [`critical`]: critical zeros, critical angles and the sign checks used
//!   to follow crossings through a perturbation.
//! - [`geometry`]: barrier constants and the exterior arcs of the nodal set.
//! - [`nodal`]: sign grids, nodal-domain counting, curve tracing, SVG.
//! - [`courant`]: Courant and Leydold-type bounds per eigenspace.

pub mod angle;
pub mod courant;
pub mod critical;
pub mod error;
pub mod geometry;
pub mod hermite;
pub mod nodal;
pub mod oscillator;
pub mod roots;

pub use angle::Angle;
pub use error::{Error, Result};

/// Version tag written into every JSON document this crate produces.
pub const SCHEMA_VERSION: u32 = 1;

/// Formats a float with 17 significant digits, the format used by all CSV
/// exports.
pub fn fmt_f64(v: f64) -> String {
    format!("{:.16e}", v)
}
