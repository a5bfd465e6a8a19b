//! Fourier representation of fields on the periodic box `[0,1) x [0,Ly)`.
//!
//! Fields are immutable values. Every nonlinear product goes through physical
//! space and is truncated with the 2/3 rule, so quadratic cancellations hold
//! exactly on the retained modes.

mod field;
mod grid;
mod vector;

pub use field::{dealias, derivative, from_spectral, multiply, to_spectral, SpectralField};
pub use grid::{make_grid, Axis, Grid, LX};
pub use vector::{divergence, leray_project, VectorField, DIV_FREE_TOL};
