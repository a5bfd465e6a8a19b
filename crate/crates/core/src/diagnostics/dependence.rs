use crate::error::{Error, Result};
use crate::solver::{make_initial, InitialDataSpec, InitialKind, Integrator, SimState, DEFAULT_CFL};
use crate::spectral::VectorField;

/// Growth of the difference between two nearby trajectories.
#[derive(Debug, Clone, PartialEq)]
pub struct DependenceReport {
    /// `max_t ||(du, dw)(t)||^2 / ||(du, dw)(0)||^2`; 1 when the perturbation is 0.
    pub growth: f64,
    /// `||(du, dw)(0)||^2`.
    pub initial: f64,
    /// `(t, ||(du, dw)(t)||^2)` at every step.
    pub series: Vec<(f64, f64)>,
}

fn diff_sq(a: &SimState, b: &SimState) -> f64 {
    a.u.sub(&b.u).l2_norm_sq() + a.w.sub(&b.w).l2_norm_sq()
}

/// Random divergence-free perturbation with
/// `||(du, dw)|| = eps * ||(u0, w0)||`.
pub fn perturbed(state0: &SimState, eps: f64, seed: u64) -> Result<SimState> {
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(Error::invalid("eps", format!("{eps} must be finite and >= 0")));
    }
    let grid = state0.grid();
    let band = |n: usize| ((n - 1) / 3).min(4);
    let spec = InitialDataSpec {
        kind: InitialKind::RandomBand {
            band_x: band(grid.nx()),
            band_y: band(grid.ny()),
        },
        amplitude: 1.0,
        delta_target: None,
        seed,
    };
    let p = make_initial(&spec, grid, state0.params)?.state;
    let base = (state0.u.l2_norm_sq() + state0.w.l2_norm_sq()).sqrt();
    let size = (p.u.l2_norm_sq() + p.w.l2_norm_sq()).sqrt();
    let c = if size > 0.0 { eps * base / size } else { 0.0 };
    let shift = |a: &VectorField, d: &VectorField| {
        let mut out = a.clone();
        out.axpy(c, d);
        out.div_free = a.div_free;
        out
    };
    SimState::new(shift(&state0.u, &p.u), shift(&state0.w, &p.w), state0.t, state0.params)
}

/// Integrates `state0` and a perturbed copy over `[0, t_end]` with step `dt`
/// and reports the largest growth of their squared `L^2` distance.
pub fn continuous_dependence(state0: &SimState, eps: f64, t_end: f64, dt: f64, seed: u64) -> Result<DependenceReport> {
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::invalid("T", format!("{t_end} must be finite and >= 0")));
    }
    let integrator = Integrator::new(state0.grid(), state0.params, dt, DEFAULT_CFL)?;
    let mut a = state0.clone();
    let mut b = perturbed(state0, eps, seed)?;
    let initial = diff_sq(&a, &b);
    let mut series = vec![(a.t, initial)];
    let n_steps = (t_end / dt - 1e-9).ceil().max(0.0) as usize;
    for _ in 0..n_steps {
        a = integrator.advance(&a)?.state;
        b = integrator.advance(&b)?.state;
        let d = diff_sq(&a, &b);
        if !d.is_finite() {
            return Err(Error::NonFinite { t: a.t });
        }
        series.push((a.t, d));
    }
    let growth = if initial == 0.0 {
        1.0
    } else {
        series.iter().map(|(_, d)| d / initial).fold(0.0, f64::max)
    };
    Ok(DependenceReport { growth, initial, series })
}
