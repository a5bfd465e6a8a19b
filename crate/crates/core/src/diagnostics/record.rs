use std::fmt::Write as _;
use std::io::Write;

use crate::decomposition::tilde_vector;
use crate::error::Result;
use crate::littlewood_paley::ShellSystem;
use crate::solver::SimState;
use crate::spectral::VectorField;

/// Normed quantities of one state, plus the running dissipation integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    /// `||u||^2 + ||w||^2`.
    pub energy: f64,
    /// `||d2 u||^2 + ||d2 w||^2`.
    pub energy_dy: f64,
    /// `nu ||d1 u||^2 + eta ||d1 w||^2`.
    pub diss_x: f64,
    /// `nu ||d1 d2 u||^2 + eta ||d1 d2 w||^2`.
    pub diss_xy: f64,
    /// `||u_tilde||^2 + ||w_tilde||^2`.
    pub energy_tilde: f64,
    /// `(s, ||(u, w)||_{H^s})` pairs.
    pub sobolev: Vec<(f64, f64)>,
    /// `int_0^t D1`.
    pub int_diss_x: f64,
    /// `int_0^t D12`.
    pub int_diss_xy: f64,
}

impl DiagnosticsRecord {
    pub fn is_finite(&self) -> bool {
        [
            self.t,
            self.energy,
            self.energy_dy,
            self.diss_x,
            self.diss_xy,
            self.energy_tilde,
            self.int_diss_x,
            self.int_diss_xy,
        ]
        .iter()
        .chain(self.sobolev.iter().map(|(_, v)| v))
        .all(|v| v.is_finite())
    }

    /// The `H^s` entry for `s`, if it was recorded.
    pub fn sobolev_at(&self, s: f64) -> Option<f64> {
        self.sobolev.iter().find(|(t, _)| *t == s).map(|(_, v)| *v)
    }
}

fn dy_sq(f: &VectorField) -> f64 {
    f.x.dy().l2_norm_sq() + f.y.dy().l2_norm_sq()
}

fn dx_sq(f: &VectorField) -> f64 {
    f.x.dx().l2_norm_sq() + f.y.dx().l2_norm_sq()
}

fn dxy_sq(f: &VectorField) -> f64 {
    f.x.dx().dy().l2_norm_sq() + f.y.dx().dy().l2_norm_sq()
}

/// Instantaneous `(D1, D12)` of a pair of fields.
pub(crate) fn dissipation_rates(u: &VectorField, w: &VectorField, nu: f64, eta: f64) -> (f64, f64) {
    (
        nu * dx_sq(u) + eta * dx_sq(w),
        nu * dxy_sq(u) + eta * dxy_sq(w),
    )
}

/// Diagnostics of `state` with zero accumulated integrals.
pub fn record(state: &SimState, sobolev_s: &[f64]) -> DiagnosticsRecord {
    let (u, w) = (&state.u, &state.w);
    let (diss_x, diss_xy) = dissipation_rates(u, w, state.params.nu, state.params.eta);
    let shells = ShellSystem::new(state.grid());
    let sobolev = sobolev_s
        .iter()
        .map(|&s| {
            let sq: f64 = [&u.x, &u.y, &w.x, &w.y]
                .iter()
                .map(|c| shells.sobolev_norm(c, s).powi(2))
                .sum();
            (s, sq.sqrt())
        })
        .collect();
    DiagnosticsRecord {
        t: state.t,
        energy: u.l2_norm_sq() + w.l2_norm_sq(),
        energy_dy: dy_sq(u) + dy_sq(w),
        diss_x,
        diss_xy,
        energy_tilde: tilde_vector(u).l2_norm_sq() + tilde_vector(w).l2_norm_sq(),
        sobolev,
        int_diss_x: 0.0,
        int_diss_xy: 0.0,
    }
}

/// Running `sup E`, `sup E2`, `int D1`, `int D12` and their sum `F`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FLedger {
    pub t: f64,
    pub sup_energy: f64,
    pub sup_energy_dy: f64,
    pub int_diss_x: f64,
    pub int_diss_xy: f64,
    pub f: f64,
}

/// `F(t)` at every record of `trajectory`.
pub fn f_functional(trajectory: &[DiagnosticsRecord]) -> Vec<FLedger> {
    let mut out = Vec::with_capacity(trajectory.len());
    let (mut se, mut se2) = (0.0f64, 0.0f64);
    for r in trajectory {
        se = se.max(r.energy);
        se2 = se2.max(r.energy_dy);
        // integrals are nondecreasing by construction; max guards against round-off
        let prev: FLedger = out.last().copied().unwrap_or_default();
        let i1 = r.int_diss_x.max(prev.int_diss_x);
        let i12 = r.int_diss_xy.max(prev.int_diss_xy);
        out.push(FLedger {
            t: r.t,
            sup_energy: se,
            sup_energy_dy: se2,
            int_diss_x: i1,
            int_diss_xy: i12,
            f: se + se2 + i1 + i12,
        });
    }
    out
}

/// Result of [`energy_identity_residual`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyResidual {
    pub value: f64,
    /// `false` when `E(0) = 0` and `value` is the absolute residual.
    pub relative: bool,
}

/// `max_t |E(t) + 2 int_0^t D1 - E(0)| / E(0)`.
pub fn energy_identity_residual(trajectory: &[DiagnosticsRecord]) -> EnergyResidual {
    let Some(first) = trajectory.first() else {
        return EnergyResidual { value: 0.0, relative: true };
    };
    let e0 = first.energy;
    let worst = trajectory
        .iter()
        .map(|r| (r.energy + 2.0 * (r.int_diss_x - first.int_diss_x) - e0).abs())
        .fold(0.0, f64::max);
    if e0 > 0.0 {
        EnergyResidual { value: worst / e0, relative: true }
    } else {
        EnergyResidual { value: worst, relative: false }
    }
}

/// Cumulative trapezoid integral of `values` over the sample times `t`.
pub fn trapezoid(t: &[f64], values: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(values.len());
    for k in 0..values.len() {
        if k > 0 {
            acc += 0.5 * (t[k] - t[k - 1]) * (values[k] + values[k - 1]);
        }
        out.push(acc);
    }
    out
}

pub fn csv_header(sobolev_s: &[f64]) -> String {
    let mut h = String::from("t,E,E2,D1,D12,E_tilde,intD1,intD12,F");
    for s in sobolev_s {
        let _ = write!(h, ",Hs:{s}");
    }
    h
}

/// Writes the trajectory as CSV; floats use shortest round-trip formatting.
pub fn write_csv<W: Write>(mut out: W, trajectory: &[DiagnosticsRecord], sobolev_s: &[f64]) -> Result<()> {
    writeln!(out, "{}", csv_header(sobolev_s))?;
    for (r, l) in trajectory.iter().zip(f_functional(trajectory)) {
        let mut line = String::new();
        for v in [
            r.t,
            r.energy,
            r.energy_dy,
            r.diss_x,
            r.diss_xy,
            r.energy_tilde,
            r.int_diss_x,
            r.int_diss_xy,
            l.f,
        ] {
            let _ = write!(line, "{v:e},");
        }
        for s in sobolev_s {
            let v = r.sobolev_at(*s).unwrap_or(f64::NAN);
            let _ = write!(line, "{v:e},");
        }
        line.pop();
        writeln!(out, "{line}")?;
    }
    Ok(())
}
