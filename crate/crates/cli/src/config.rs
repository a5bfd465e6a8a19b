//! Run configuration files (TOML).
//!
//! ```toml
//! model = "mhd"          # or "tcm"
//! nx = 64
//! ny = 64
//! ly = 4.0
//! nu = 0.1
//! eta = 0.1
//! dt = 1e-3
//! t_end = 1.0
//! record_every = 10
//! output = "runs/example"
//! snapshot_every = 500   # optional, in steps
//! sobolev = [2.0]
//!
//! [initial]
//! kind = "random_band"   # "single_mode" | "gaussian_packet" | "random_band"
//! amplitude = 1.0
//! delta = 1e-2           # optional smallness target
//! seed = 1
//! band_x = 4
//! band_y = 8
//! ```

use std::path::{Path, PathBuf};

use amhd_core::solver::{InitialDataSpec, InitialKind, Model, ModelParams, Target};
use amhd_core::{make_grid, Grid};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: String,
    pub nx: usize,
    pub ny: usize,
    #[serde(default = "default_ly")]
    pub ly: f64,
    pub nu: f64,
    pub eta: f64,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    pub output: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_every: Option<usize>,
    #[serde(default = "default_sobolev")]
    pub sobolev: Vec<f64>,
    pub initial: InitialConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    pub kind: String,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mx: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub my: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band_x: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band_y: Option<usize>,
}

fn default_ly() -> f64 {
    4.0
}

fn default_record_every() -> usize {
    1
}

fn default_sobolev() -> Vec<f64> {
    vec![2.0]
}

fn default_amplitude() -> f64 {
    1.0
}

/// A configuration problem, naming the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub reason: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid `{}`: {}", self.field, self.reason)
    }
}

impl std::error::Error for ConfigError {}

fn bad(field: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError {
        field: field.to_string(),
        reason: reason.into(),
    }
}

/// Everything needed to start a run, checked and converted.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub grid: Grid,
    pub params: ModelParams,
    pub initial: InitialDataSpec,
}

/// Numeric fields accepted by [`RunConfig::set_numeric`].
pub const NUMERIC_FIELDS: &[&str] = &[
    "nx",
    "ny",
    "ly",
    "nu",
    "eta",
    "dt",
    "t_end",
    "record_every",
    "snapshot_every",
    "amplitude",
    "delta",
    "seed",
];

fn as_count(field: &str, v: f64) -> Result<usize, ConfigError> {
    if v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(bad(field, format!("{v} is not a nonnegative integer")))
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| bad("config", e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad("config", format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    /// Overwrites one numeric field by name (used by sweeps).
    pub fn set_numeric(&mut self, field: &str, v: f64) -> Result<(), ConfigError> {
        match field {
            "nx" => self.nx = as_count(field, v)?,
            "ny" => self.ny = as_count(field, v)?,
            "ly" => self.ly = v,
            "nu" => self.nu = v,
            "eta" => self.eta = v,
            "dt" => self.dt = v,
            "t_end" => self.t_end = v,
            "record_every" => self.record_every = as_count(field, v)?,
            "snapshot_every" => self.snapshot_every = Some(as_count(field, v)?),
            "amplitude" => self.initial.amplitude = v,
            "delta" => self.initial.delta = Some(v),
            "seed" => self.initial.seed = as_count(field, v)? as u64,
            other => {
                return Err(bad(
                    "axis",
                    format!("`{other}` is not a numeric field; expected one of {}", NUMERIC_FIELDS.join(", ")),
                ))
            }
        }
        Ok(())
    }

    /// Checks every field and builds the solver inputs. Nothing is computed
    /// beyond the grid and the initial-data recipe.
    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        let model: Model = self.model.parse().map_err(|_| bad("model", format!("unknown model `{}`", self.model)))?;
        for (name, n) in [("nx", self.nx), ("ny", self.ny)] {
            if n < 4 || n % 2 != 0 {
                return Err(bad(name, format!("{n} must be even and at least 4")));
            }
        }
        if !(self.ly.is_finite() && self.ly > 0.0) {
            return Err(bad("ly", format!("{} must be positive", self.ly)));
        }
        for (name, v) in [("nu", self.nu), ("eta", self.eta)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(bad(name, format!("{v} must be finite and >= 0")));
            }
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(bad("dt", format!("{} must be positive", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(bad("t_end", format!("{} must be finite and >= 0", self.t_end)));
        }
        if self.record_every == 0 {
            return Err(bad("record_every", "must be at least 1"));
        }
        if self.snapshot_every == Some(0) {
            return Err(bad("snapshot_every", "must be at least 1"));
        }
        if let Some(s) = self.sobolev.iter().find(|s| !s.is_finite()) {
            return Err(bad("sobolev", format!("{s} is not finite")));
        }
        if self.output.as_os_str().is_empty() {
            return Err(bad("output", "must not be empty"));
        }
        let grid = make_grid(self.nx, self.ny, self.ly).map_err(|e| bad("nx", e.to_string()))?;
        let params = ModelParams::new(model, self.nu, self.eta).map_err(|e| bad("nu", e.to_string()))?;
        let initial = self.initial.to_spec(&grid)?;
        // generate once so that mode and band errors surface before the run
        amhd_core::solver::make_initial(&initial, &grid, params).map_err(|e| bad("initial", e.to_string()))?;
        Ok(Resolved { grid, params, initial })
    }
}

impl InitialConfig {
    fn to_spec(&self, grid: &Grid) -> Result<InitialDataSpec, ConfigError> {
        let need = |v: Option<i64>, name: &str| v.ok_or_else(|| bad(&format!("initial.{name}"), "required for this kind"));
        let kind = match self.kind.as_str() {
            "single_mode" => {
                let target = match self.target.as_deref().unwrap_or("u") {
                    "u" => Target::U,
                    "w" => Target::W,
                    "both" => Target::Both,
                    other => return Err(bad("initial.target", format!("`{other}` is not u, w or both"))),
                };
                InitialKind::SingleMode {
                    target,
                    mx: need(self.mx, "mx")?,
                    my: need(self.my, "my")?,
                }
            }
            "gaussian_packet" => InitialKind::GaussianPacket {
                modes: self.modes.unwrap_or(4),
            },
            "random_band" => InitialKind::RandomBand {
                band_x: self.band_x.unwrap_or_else(|| ((grid.nx() - 1) / 3).min(4)),
                band_y: self.band_y.unwrap_or_else(|| ((grid.ny() - 1) / 3).min(8)),
            },
            other => {
                return Err(bad(
                    "initial.kind",
                    format!("`{other}` is not single_mode, gaussian_packet or random_band"),
                ))
            }
        };
        if !(self.amplitude.is_finite() && self.amplitude >= 0.0) {
            return Err(bad("initial.amplitude", format!("{} must be finite and >= 0", self.amplitude)));
        }
        if let Some(d) = self.delta {
            if !(d.is_finite() && d > 0.0) {
                return Err(bad("initial.delta", format!("{d} must be positive")));
            }
        }
        Ok(InitialDataSpec {
            kind,
            amplitude: self.amplitude,
            delta_target: self.delta,
            seed: self.seed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
model = "mhd"
nx = 16
ny = 16
nu = 0.1
eta = 0.1
dt = 0.01
t_end = 0.1
output = "out"

[initial]
kind = "random_band"
delta = 0.01
seed = 3
"#;

    #[test]
    fn minimal_config_resolves_with_defaults() {
        let c = RunConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(c.ly, 4.0);
        assert_eq!(c.record_every, 1);
        assert_eq!(c.sobolev, vec![2.0]);
        let r = c.resolve().unwrap();
        assert_eq!(r.grid.nx(), 16);
        assert_eq!(r.initial.kind, InitialKind::RandomBand { band_x: 4, band_y: 5 });
    }

    #[test]
    fn serialization_round_trips() {
        let c = RunConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(RunConfig::from_toml(&c.to_toml()).unwrap(), c);
    }

    #[test]
    fn errors_name_the_field() {
        let mut c = RunConfig::from_toml(MINIMAL).unwrap();
        c.dt = 0.0;
        assert_eq!(c.resolve().unwrap_err().field, "dt");
        let mut c = RunConfig::from_toml(MINIMAL).unwrap();
        c.nx = 15;
        assert_eq!(c.resolve().unwrap_err().field, "nx");
        let mut c = RunConfig::from_toml(MINIMAL).unwrap();
        c.model = "euler".into();
        assert_eq!(c.resolve().unwrap_err().field, "model");
        let mut c = RunConfig::from_toml(MINIMAL).unwrap();
        c.initial.kind = "single_mode".into();
        assert_eq!(c.resolve().unwrap_err().field, "initial.mx");
        assert!(RunConfig::from_toml("model = 1").is_err());
        assert!(RunConfig::from_toml(&format!("{MINIMAL}\nbogus = 1")).is_err());
    }

    #[test]
    fn numeric_overrides() {
        let mut c = RunConfig::from_toml(MINIMAL).unwrap();
        c.set_numeric("nu", 0.2).unwrap();
        c.set_numeric("nx", 32.0).unwrap();
        c.set_numeric("delta", 1e-3).unwrap();
        assert_eq!((c.nu, c.nx, c.initial.delta), (0.2, 32, Some(1e-3)));
        assert!(c.set_numeric("nx", 31.5).is_err());
        assert_eq!(c.set_numeric("model", 1.0).unwrap_err().field, "axis");
    }
}
