use num_complex::Complex64;

use super::rhs::tendencies;
use super::{nonlinear_rhs, ModelParams, SimState};
use crate::diagnostics::{dissipation_rates, record, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::spectral::{Grid, VectorField};

/// Default advective Courant number.
pub const DEFAULT_CFL: f64 = 0.5;

/// Integrating-factor RK4 stepper with a fixed step size.
///
/// The `d1^2` terms are applied through the exact row factors
/// `exp(-nu kx^2 tau)`; the nonlinear terms use the classical four stages.
/// The dissipation integrals `int D1` and `int D12` are advanced with the
/// same stage weights, so they stay consistent with the trajectory to the
/// order of the scheme.
#[derive(Debug, Clone)]
pub struct Integrator {
    grid: Grid,
    params: ModelParams,
    dt: f64,
    cfl: f64,
    half_u: Vec<f64>,
    full_u: Vec<f64>,
    half_w: Vec<f64>,
    full_w: Vec<f64>,
}

/// State after one step, with the dissipation integrals over that step.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub state: SimState,
    pub int_d1: f64,
    pub int_d12: f64,
}

impl Integrator {
    pub fn new(grid: &Grid, params: ModelParams, dt: f64, cfl: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid("dt", format!("{dt} must be positive and finite")));
        }
        if !(cfl.is_finite() && cfl > 0.0) {
            return Err(Error::invalid("cfl", format!("{cfl} must be positive and finite")));
        }
        let factors = |coef: f64, tau: f64| -> Vec<f64> {
            grid.kx().iter().map(|k| (-coef * k * k * tau).exp()).collect()
        };
        Ok(Integrator {
            grid: grid.clone(),
            params,
            dt,
            cfl,
            half_u: factors(params.nu, 0.5 * dt),
            full_u: factors(params.nu, dt),
            half_w: factors(params.eta, 0.5 * dt),
            full_w: factors(params.eta, dt),
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Largest step the CFL condition admits for `state`.
    pub fn cfl_limit(&self, state: &SimState) -> f64 {
        let speed = state.max_speed();
        if speed == 0.0 {
            f64::INFINITY
        } else {
            self.cfl * self.grid.dx().min(self.grid.dy()) / speed
        }
    }

    pub fn advance(&self, state: &SimState) -> Result<StepOutcome> {
        if state.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let limit = self.cfl_limit(state);
        if self.dt > limit {
            return Err(Error::Cfl {
                dt: self.dt,
                limit,
                max_speed: state.max_speed(),
            });
        }
        let h = self.dt;
        let model = self.params.model;
        let (nu, eta) = (self.params.nu, self.params.eta);
        let (u, w) = (&state.u, &state.w);

        let (k1u, k1w) = nonlinear_rhs(state)?;
        let (d0, d0xy) = dissipation_rates(u, w, nu, eta);

        let mut au = u.clone();
        au.axpy(0.5 * h, &k1u);
        let au = scaled(&au, &self.half_u);
        let mut aw = w.clone();
        aw.axpy(0.5 * h, &k1w);
        let aw = scaled(&aw, &self.half_w);
        let (k2u, k2w) = tendencies(&au, &aw, model);
        let (da, daxy) = dissipation_rates(&au, &aw, nu, eta);

        let hu = scaled(u, &self.half_u);
        let hw = scaled(w, &self.half_w);
        let mut bu = hu.clone();
        bu.axpy(0.5 * h, &k2u);
        let mut bw = hw.clone();
        bw.axpy(0.5 * h, &k2w);
        let (k3u, k3w) = tendencies(&bu, &bw, model);
        let (db, dbxy) = dissipation_rates(&bu, &bw, nu, eta);

        let fu = scaled(u, &self.full_u);
        let fw = scaled(w, &self.full_w);
        let mut cu = fu.clone();
        cu.axpy(h, &scaled(&k3u, &self.half_u));
        let mut cw = fw.clone();
        cw.axpy(h, &scaled(&k3w, &self.half_w));
        let (k4u, k4w) = tendencies(&cu, &cw, model);
        let (dc, dcxy) = dissipation_rates(&cu, &cw, nu, eta);

        let combine = |base: VectorField, k1: &VectorField, k2: &VectorField, k3: &VectorField, k4: &VectorField, half: &[f64], full: &[f64]| {
            let mut out = base;
            out.axpy(h / 6.0, &scaled(k1, full));
            out.axpy(h / 3.0, &scaled(&k2.add(k3), half));
            out.axpy(h / 6.0, k4);
            out.div_free = true;
            out
        };
        let nu_ = combine(fu, &k1u, &k2u, &k3u, &k4u, &self.half_u, &self.full_u);
        let nw_ = combine(fw, &k1w, &k2w, &k3w, &k4w, &self.half_w, &self.full_w);

        let t = state.t + h;
        if !(nu_.is_finite() && nw_.is_finite()) {
            return Err(Error::NonFinite { t });
        }
        Ok(StepOutcome {
            state: SimState {
                u: nu_,
                w: nw_,
                t,
                params: state.params,
            },
            int_d1: h / 6.0 * (d0 + 2.0 * da + 2.0 * db + dc),
            int_d12: h / 6.0 * (d0xy + 2.0 * daxy + 2.0 * dbxy + dcxy),
        })
    }
}

fn scaled(f: &VectorField, rows: &[f64]) -> VectorField {
    let mut out = f.clone();
    let ny = f.grid().ny();
    for comp in [&mut out.x, &mut out.y] {
        for (row, &e) in comp.coeffs_mut().chunks_exact_mut(ny).zip(rows) {
            if e != 1.0 {
                row.iter_mut().for_each(|c: &mut Complex64| *c *= e);
            }
        }
    }
    out
}

/// One step of size `dt` with the default CFL number.
pub fn step(state: &SimState, dt: f64) -> Result<SimState> {
    Integrator::new(state.grid(), state.params, dt, DEFAULT_CFL)?
        .advance(state)
        .map(|o| o.state)
}

/// Options for [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub cfl: f64,
    /// Sobolev exponents recorded in every diagnostics record.
    pub sobolev: Vec<f64>,
    /// Keep a copy of the state every this many steps (and at the end).
    pub snapshot_every: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            cfl: DEFAULT_CFL,
            sobolev: vec![2.0],
            snapshot_every: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub records: Vec<DiagnosticsRecord>,
    pub final_state: SimState,
    pub snapshots: Vec<SimState>,
}

/// A run that stopped early, with everything recorded before the failure.
#[derive(Debug)]
pub struct RunFailure {
    pub error: Error,
    /// Diagnostics of the last finite state reached.
    pub last_record: Option<Box<DiagnosticsRecord>>,
    pub records: Vec<DiagnosticsRecord>,
}

impl std::fmt::Display for RunFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.last_record {
            Some(r) => write!(f, "{} (last good state at t = {})", self.error, r.t),
            None => write!(f, "{}", self.error),
        }
    }
}

impl std::error::Error for RunFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

impl From<Error> for RunFailure {
    fn from(error: Error) -> Self {
        RunFailure {
            error,
            last_record: None,
            records: Vec::new(),
        }
    }
}

/// Integrates `state0` over a time span `t_end` with step `dt`.
///
/// Records are taken at the first state, every `record_every` steps and at
/// the final state. If `t_end` is not a multiple of `dt` the last step is
/// shortened. `t_end = 0` returns an empty trajectory.
pub fn run(
    state0: &SimState,
    t_end: f64,
    dt: f64,
    record_every: usize,
    opts: &RunOptions,
) -> std::result::Result<RunOutput, RunFailure> {
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::invalid("T", format!("{t_end} must be finite and >= 0")).into());
    }
    if record_every == 0 {
        return Err(Error::invalid("record_every", "must be at least 1").into());
    }
    if opts.snapshot_every == Some(0) {
        return Err(Error::invalid("snapshot_every", "must be at least 1").into());
    }
    let integrator = Integrator::new(state0.grid(), state0.params, dt, opts.cfl)?;
    if !state0.is_finite() {
        return Err(Error::NonFinite { t: state0.t }.into());
    }
    if t_end == 0.0 {
        return Ok(RunOutput {
            records: Vec::new(),
            final_state: state0.clone(),
            snapshots: Vec::new(),
        });
    }

    let ratio = t_end / dt;
    let mut n_steps = ratio.round();
    if (ratio - n_steps).abs() > 1e-9 * ratio.max(1.0) {
        n_steps = ratio.ceil();
    }
    let n_steps = n_steps.max(1.0) as usize;
    let last_dt = t_end - (n_steps - 1) as f64 * dt;
    let last = if (last_dt - dt).abs() <= 1e-12 * dt {
        None
    } else {
        Some(Integrator::new(state0.grid(), state0.params, last_dt, opts.cfl)?)
    };

    let t0 = state0.t;
    let mut state = state0.clone();
    let (mut int1, mut int12) = (0.0, 0.0);
    let take = |s: &SimState, i1: f64, i12: f64| {
        let mut r = record(s, &opts.sobolev);
        r.int_diss_x = i1;
        r.int_diss_xy = i12;
        r
    };
    let mut records = vec![take(&state, 0.0, 0.0)];
    let mut snapshots = Vec::new();
    if opts.snapshot_every.is_some() {
        snapshots.push(state.clone());
    }
    for n in 1..=n_steps {
        let stepper = match (&last, n == n_steps) {
            (Some(l), true) => l,
            _ => &integrator,
        };
        let outcome = match stepper.advance(&state) {
            Ok(o) => o,
            Err(error) => {
                let last_record = Some(Box::new(take(&state, int1, int12)));
                return Err(RunFailure { error, last_record, records });
            }
        };
        state = outcome.state;
        state.t = if n == n_steps { t0 + t_end } else { t0 + n as f64 * dt };
        int1 += outcome.int_d1;
        int12 += outcome.int_d12;
        if n % record_every == 0 || n == n_steps {
            records.push(take(&state, int1, int12));
        }
        if let Some(every) = opts.snapshot_every {
            if n % every == 0 || n == n_steps {
                snapshots.push(state.clone());
            }
        }
    }
    Ok(RunOutput {
        records,
        final_state: state,
        snapshots,
    })
}
