use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{ModelParams, SimState};
use crate::error::{Error, Result};
use crate::littlewood_paley::K0;
use crate::spectral::{Grid, SpectralField, VectorField};

/// Which of the two fields receives a single-mode perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    U,
    W,
    Both,
}

/// Shape of the generated initial data.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialKind {
    /// `a (k_perp / |k|) cos(k . x)` for the mode `(mx, my)`; for `(1, 0)` this is
    /// `(0, a cos 2 pi x)`. The amplitude `a` is the peak speed.
    SingleMode { target: Target, mx: i64, my: i64 },
    /// Stream function `exp(-(y - Ly/2)^2 / (2 s^2)) sum_m c_m cos(2 pi m x + phi_m)`
    /// with `s = Ly/16` and random `c_m`, `phi_m` for `m = 0..=modes`, one
    /// independent draw per field. Amplitude is the RMS speed.
    GaussianPacket { modes: usize },
    /// Random stream function on `|n_x| <= band_x`, `|n_y| <= band_y` with
    /// coefficients decaying like `1 / (1 + |k/k0|^2)`, independent per field.
    /// Amplitude is the RMS speed.
    RandomBand { band_x: usize, band_y: usize },
}

/// Recipe for initial data.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialDataSpec {
    pub kind: InitialKind,
    pub amplitude: f64,
    /// When set, the fields are rescaled so that
    /// `||(u,w)||^2 + ||d2 (u,w)||^2` equals this value.
    pub delta_target: Option<f64>,
    pub seed: u64,
}

/// Generated state together with its smallness measure.
#[derive(Debug, Clone)]
pub struct InitialState {
    pub state: SimState,
    /// `||(u0,w0)||_{L^2}^2 + ||d2 (u0,w0)||_{L^2}^2`.
    pub delta0: f64,
}

/// `||(u,w)||^2 + ||d2 (u,w)||^2`.
pub fn smallness(u: &VectorField, w: &VectorField) -> f64 {
    let d2 = |f: &VectorField| f.x.dy().l2_norm_sq() + f.y.dy().l2_norm_sq();
    u.l2_norm_sq() + w.l2_norm_sq() + d2(u) + d2(w)
}

pub fn make_initial(spec: &InitialDataSpec, grid: &Grid, params: ModelParams) -> Result<InitialState> {
    if !spec.amplitude.is_finite() || spec.amplitude < 0.0 {
        return Err(Error::invalid("amplitude", format!("{} must be finite and >= 0", spec.amplitude)));
    }
    if let Some(d) = spec.delta_target {
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::invalid("delta", format!("target {d} must be positive")));
        }
        if spec.amplitude == 0.0 {
            return Err(Error::invalid("amplitude", "zero amplitude cannot meet a positive delta target"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (mut u, mut w) = match spec.kind {
        InitialKind::SingleMode { target, mx, my } => {
            let shape = single_mode(grid, mx, my)?.scale(spec.amplitude);
            let zero = VectorField::zeros(grid);
            match target {
                Target::U => (shape, zero),
                Target::W => (zero, shape),
                Target::Both => (shape.clone(), shape),
            }
        }
        InitialKind::GaussianPacket { modes } => {
            let u = gaussian_packet(grid, modes, &mut rng)?;
            let w = gaussian_packet(grid, modes, &mut rng)?;
            rms_scaled(u, w, spec.amplitude)
        }
        InitialKind::RandomBand { band_x, band_y } => {
            let u = random_band(grid, band_x, band_y, &mut rng)?;
            let w = random_band(grid, band_x, band_y, &mut rng)?;
            rms_scaled(u, w, spec.amplitude)
        }
    };
    if let Some(target) = spec.delta_target {
        let raw = smallness(&u, &w);
        if raw == 0.0 {
            return Err(Error::invalid("amplitude", "generated field is zero; delta target unreachable"));
        }
        let c = (target / raw).sqrt();
        u = u.scale(c);
        w = w.scale(c);
    }
    u.div_free = true;
    w.div_free = true;
    let delta0 = smallness(&u, &w);
    Ok(InitialState {
        state: SimState::new(u, w, 0.0, params)?,
        delta0,
    })
}

fn rms_scaled(u: VectorField, w: VectorField, amplitude: f64) -> (VectorField, VectorField) {
    let area = u.grid().area();
    let rms = ((u.l2_norm_sq() + w.l2_norm_sq()) / area).sqrt();
    if rms == 0.0 {
        return (u, w);
    }
    let c = amplitude / rms;
    (u.scale(c), w.scale(c))
}

/// Velocity of the stream function `psi`: `(d2 psi, -d1 psi)`, dealiased.
fn perp_gradient(psi: &SpectralField) -> VectorField {
    let mut v = VectorField {
        x: psi.dy().dealias(),
        y: psi.dx().scale(-1.0).dealias(),
        div_free: true,
    };
    v = v.leray_project();
    v
}

fn single_mode(grid: &Grid, mx: i64, my: i64) -> Result<VectorField> {
    if mx == 0 && my == 0 {
        return Err(Error::invalid("mode", "the (0, 0) mode carries no divergence-free flow"));
    }
    let idx = grid
        .mode_index(mx, my)
        .ok_or_else(|| Error::invalid("mode", format!("({mx}, {my}) not on grid")))?;
    let (i, j) = (idx / grid.ny(), idx % grid.ny());
    if !grid.is_retained(i, j) {
        return Err(Error::invalid("mode", format!("({mx}, {my}) is removed by dealiasing")));
    }
    let (kx, ky) = (grid.kx()[i], grid.ky()[j]);
    let k = kx.hypot(ky);
    let mut fx = SpectralField::zeros(grid);
    let mut fy = SpectralField::zeros(grid);
    fx.set_mode(mx, my, Complex64::new(-ky / k * 0.5, 0.0))?;
    fy.set_mode(mx, my, Complex64::new(kx / k * 0.5, 0.0))?;
    Ok(VectorField {
        x: fx,
        y: fy,
        div_free: true,
    })
}

fn gaussian_packet(grid: &Grid, modes: usize, rng: &mut ChaCha8Rng) -> Result<VectorField> {
    if 3 * modes >= grid.nx() {
        return Err(Error::invalid("modes", format!("{modes} x-modes exceed the dealiased range")));
    }
    let terms: Vec<(f64, f64)> = (0..=modes)
        .map(|m| {
            let c: f64 = rng.sample(StandardNormal);
            let phase = rng.random::<f64>() * 2.0 * std::f64::consts::PI;
            (c / (1.0 + (m * m) as f64), phase)
        })
        .collect();
    let ly = grid.ly();
    let width = ly / 16.0;
    let psi = SpectralField::from_fn(grid, |x, y| {
        let envelope = (-(y - 0.5 * ly).powi(2) / (2.0 * width * width)).exp();
        let wave: f64 = terms
            .iter()
            .enumerate()
            .map(|(m, (c, phase))| c * (2.0 * std::f64::consts::PI * m as f64 * x + phase).cos())
            .sum();
        envelope * wave
    });
    Ok(perp_gradient(&psi))
}

fn random_band(grid: &Grid, band_x: usize, band_y: usize, rng: &mut ChaCha8Rng) -> Result<VectorField> {
    if 3 * band_x >= grid.nx() || 3 * band_y >= grid.ny() {
        return Err(Error::invalid("band", format!("band ({band_x}, {band_y}) exceeds the dealiased range")));
    }
    if band_x == 0 && band_y == 0 {
        return Err(Error::invalid("band", "band must contain a nonzero mode"));
    }
    let mut psi = SpectralField::zeros(grid);
    let (bx, by) = (band_x as i64, band_y as i64);
    for mx in 0..=bx {
        for my in -by..=by {
            if mx == 0 && my <= 0 {
                continue;
            }
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let kx = K0 * mx as f64 / grid.lx();
            let ky = K0 * my as f64 / grid.ly();
            let r2 = (kx * kx + ky * ky) / (K0 * K0);
            psi.set_mode(mx, my, Complex64::new(re, im) / (1.0 + r2))?;
        }
    }
    Ok(perp_gradient(&psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::Model;
    use crate::spectral::make_grid;

    fn params() -> ModelParams {
        ModelParams::new(Model::Mhd, 0.1, 0.1).unwrap()
    }

    #[test]
    fn single_mode_example() {
        let ly = 4.0;
        let g = make_grid(16, 16, ly).unwrap();
        let a = 0.3;
        let spec = InitialDataSpec {
            kind: InitialKind::SingleMode { target: Target::U, mx: 1, my: 0 },
            amplitude: a,
            delta_target: None,
            seed: 0,
        };
        let init = make_initial(&spec, &g, params()).unwrap();
        let u = &init.state.u;
        assert!(u.x.max_modal() == 0.0);
        let uy = u.y.to_physical();
        for i in 0..16 {
            let want = a * (2.0 * std::f64::consts::PI * g.x(i)).cos();
            assert!((uy[g.index(i, 5)] - want).abs() < 1e-14);
        }
        assert!((init.delta0 - a * a / 2.0 * ly).abs() < 1e-14);
        assert!(init.state.w.l2_norm() == 0.0);
        assert!(init.state.max_divergence() < 1e-14);
    }

    #[test]
    fn delta_target_is_met() {
        let g = make_grid(32, 32, 4.0).unwrap();
        let spec = InitialDataSpec {
            kind: InitialKind::RandomBand { band_x: 3, band_y: 6 },
            amplitude: 1.0,
            delta_target: Some(1e-4),
            seed: 7,
        };
        let init = make_initial(&spec, &g, params()).unwrap();
        assert!((init.delta0 - 1e-4).abs() < 1e-10);
        let s = &init.state;
        assert!(s.max_divergence() <= 1e-12 * s.u.max_modal().max(s.w.max_modal()));
    }

    #[test]
    fn zero_amplitude_with_target_is_degenerate() {
        let g = make_grid(16, 16, 4.0).unwrap();
        let spec = InitialDataSpec {
            kind: InitialKind::RandomBand { band_x: 2, band_y: 2 },
            amplitude: 0.0,
            delta_target: Some(1e-4),
            seed: 1,
        };
        assert!(make_initial(&spec, &g, params()).is_err());
    }

    #[test]
    fn packet_is_deterministic_and_centered() {
        let ly = 4.0;
        let g = make_grid(32, 64, ly).unwrap();
        let spec = InitialDataSpec {
            kind: InitialKind::GaussianPacket { modes: 3 },
            amplitude: 0.05,
            delta_target: None,
            seed: 42,
        };
        let a = make_initial(&spec, &g, params()).unwrap().state;
        let b = make_initial(&spec, &g, params()).unwrap().state;
        for (p, q) in [(&a.u.x, &b.u.x), (&a.u.y, &b.u.y), (&a.w.x, &b.w.x), (&a.w.y, &b.w.y)] {
            assert!(p.coeffs().iter().zip(q.coeffs()).all(|(s, t)| s.re.to_bits() == t.re.to_bits() && s.im.to_bits() == t.im.to_bits()));
        }
        // nearly all energy sits in the middle half of the y-range
        let samples = a.u.x.to_physical();
        let (mut inside, mut total) = (0.0, 0.0);
        for i in 0..g.nx() {
            for j in 0..g.ny() {
                let e = samples[g.index(i, j)].powi(2);
                total += e;
                if (g.y(j) - ly / 2.0).abs() < ly / 4.0 {
                    inside += e;
                }
            }
        }
        assert!(inside / total > 0.999);
    }

    #[test]
    fn out_of_band_requests_fail() {
        let g = make_grid(16, 16, 4.0).unwrap();
        let mut spec = InitialDataSpec {
            kind: InitialKind::RandomBand { band_x: 6, band_y: 2 },
            amplitude: 1.0,
            delta_target: None,
            seed: 1,
        };
        assert!(make_initial(&spec, &g, params()).is_err());
        spec.kind = InitialKind::SingleMode { target: Target::W, mx: 0, my: 0 };
        assert!(make_initial(&spec, &g, params()).is_err());
    }
}
