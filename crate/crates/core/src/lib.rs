//! Regularized recovery of a diffusion coefficient `a` on `I = [g0, g1]` from
//! boundary trace data.
//!
//! The forward map is the chain `a -> b = ∫ a -> b -> b ∘ (g∘γ)`. The middle
//! (compact) link is replaced by `w -> w - α w''` restricted to
//! `{w : w(g0) = 0, w'(g1) = 0}`, whose inverse is a two-point boundary value
//! problem. Modules follow that chain:
//!
//! * [`func1d`]: uniform-grid functions, quadrature, discrete Sobolev norms.
//! * [`intervals`]: image intersections for perturbed boundary data.
//! * [`operators`]: integration, the regularized second-difference operator,
//!   the boundary projection and composition with the curve map.
//! * [`regularizer`]: the ODE solve and the full reconstruction pipeline.
//! * [`pwl`]: L² projection onto piecewise-linear functions and mesh checks.
//! * [`datagen`]: manufactured problems and seeded noise.
//! * [`experiments`]: sweeps, rate fits, the property suite and file output.

pub mod datagen;
pub mod error;
pub mod experiments;
pub mod func1d;
pub mod intervals;
pub mod operators;
pub mod pwl;
pub mod regularizer;
mod tridiag;

pub use error::{Error, Result};
