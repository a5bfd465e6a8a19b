//! Time integration of the horizontally dissipative MHD system and of the
//! simplified tropical climate model.
//!
//! Both models share the form
//!
//! ```text
//! d_t u + P(u.grad u) - nu d1^2 u = sigma P(w.grad w)
//! d_t w + u.grad w   - eta d1^2 w = sigma w.grad u        (+ grad Phi for TCM)
//! ```
//!
//! with `sigma = +1` for MHD (`w = b`) and `sigma = -1` for the tropical
//! climate model (`w = v`). Pressure and `Phi` are removed by the Leray
//! projector `P`; the `d1^2` dissipation is integrated exactly by an
//! integrating factor.

mod initial;
mod rhs;
mod stepper;

pub use initial::{make_initial, smallness, InitialDataSpec, InitialKind, InitialState, Target};
pub use rhs::nonlinear_rhs;
pub use stepper::{run, step, Integrator, RunFailure, RunOptions, RunOutput, StepOutcome, DEFAULT_CFL};

use crate::error::{Error, Result};
use crate::spectral::{Grid, VectorField};

/// Which coupled system is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Magnetohydrodynamics, second field is the magnetic field `b`.
    Mhd,
    /// Simplified tropical climate model, second field is the baroclinic mode `v`.
    Tcm,
}

impl Model {
    /// Sign of the coupling terms.
    pub fn sigma(self) -> f64 {
        match self {
            Model::Mhd => 1.0,
            Model::Tcm => -1.0,
        }
    }

    /// Tag used in snapshot files.
    pub fn tag(self) -> u8 {
        match self {
            Model::Mhd => 0,
            Model::Tcm => 1,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(Model::Mhd),
            1 => Some(Model::Tcm),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::Mhd => "mhd",
            Model::Tcm => "tcm",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mhd" => Ok(Model::Mhd),
            "tcm" | "tropical" => Ok(Model::Tcm),
            other => Err(Error::invalid("model", format!("unknown model `{other}`"))),
        }
    }
}

/// Model selector and horizontal dissipation coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub model: Model,
    /// Horizontal viscosity.
    pub nu: f64,
    /// Horizontal magnetic (or baroclinic) diffusion.
    pub eta: f64,
}

impl ModelParams {
    pub fn new(model: Model, nu: f64, eta: f64) -> Result<Self> {
        for (name, v) in [("nu", nu), ("eta", eta)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(name, format!("{v} must be finite and >= 0")));
            }
        }
        Ok(ModelParams { model, nu, eta })
    }
}

/// One simulation state. Pressure and `Phi` have no stored representation.
#[derive(Debug, Clone)]
pub struct SimState {
    /// Velocity (barotropic mode for TCM).
    pub u: VectorField,
    /// Magnetic field (MHD) or baroclinic mode (TCM).
    pub w: VectorField,
    pub t: f64,
    pub params: ModelParams,
}

impl SimState {
    pub fn new(u: VectorField, w: VectorField, t: f64, params: ModelParams) -> Result<Self> {
        if u.grid() != w.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(SimState { u, w, t, params })
    }

    pub fn grid(&self) -> &Grid {
        self.u.grid()
    }

    /// Largest modal divergence of `u` and `w`.
    pub fn max_divergence(&self) -> f64 {
        self.u.max_modal_divergence().max(self.w.max_modal_divergence())
    }

    pub fn max_speed(&self) -> f64 {
        self.u.max_speed().max(self.w.max_speed())
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.w.is_finite()
    }
}
