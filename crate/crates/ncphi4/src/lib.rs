//! One-loop renormalization toolkit for a translation-invariant noncommutative
//! scalar field theory on four-dimensional Moyal space.
//!
//! The model is a Euclidean phi^4 theory whose quadratic part carries, besides
//! the usual `p^2 + m^2`, an infrared term `a / (theta^2 p^2)`. The crate
//! computes, at desk scale:
//!
//! * the exact propagator, its commutative + noncommutative-correction
//!   decomposition and its multiscale (Schwinger-parameter) slices
//!   ([`model`]);
//! * ribbon-graph data for Moyal Feynman graphs: faces, broken faces, genus,
//!   the planar regular / planar irregular / nonplanar classification, and the
//!   all-order power-counting verdict for correction insertions ([`ribbon`]);
//! * cutoff-regularized one-loop amplitudes, including the oscillatory
//!   planar-irregular tadpole, with quadrature error estimates
//!   ([`amplitudes`]);
//! * divergence fits over a cutoff grid and the resulting `gamma`, `beta_m`,
//!   `beta_a`, `beta_lambda` report ([`rg_flow`]).
//!
//! All operations are pure functions of immutable inputs and may be called
//! concurrently.

pub mod amplitudes;
pub mod error;
pub mod model;
pub mod numeric;
pub mod rg_flow;
pub mod ribbon;

pub use error::{Error, Result};
pub use model::{ModelParams, Momentum4, Roots, SliceFamily, ThetaMatrix};
