//! Pseudo-spectral laboratory for the 2D MHD system with horizontal-only
//! dissipation and for the simplified tropical climate model, together with
//! the anisotropic toolkit used to analyse it: x-average/oscillation
//! splitting, sharp Littlewood-Paley blocks, Besov and Sobolev norms, and
//! energy and cancellation diagnostics.

pub mod decomposition;
pub mod diagnostics;
pub mod error;
pub mod littlewood_paley;
pub mod snapshot;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use spectral::{make_grid, Axis, Grid, SpectralField, VectorField};
