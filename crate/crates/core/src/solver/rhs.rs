use super::{Model, SimState};
use crate::error::{Error, Result};
use crate::spectral::{SpectralField, VectorField, DIV_FREE_TOL};

/// Projected nonlinear tendencies `(du, dw)` of `state`, without dissipation.
///
/// `du = P(-u.grad u + sigma w.grad w)` and `dw = -u.grad w + sigma w.grad u`;
/// `dw` is projected as well (it removes `grad Phi` for the climate model and
/// round-off for MHD). All products are dealiased.
pub fn nonlinear_rhs(state: &SimState) -> Result<(VectorField, VectorField)> {
    for field in [&state.u, &state.w] {
        let div = field.max_modal_divergence();
        if div > DIV_FREE_TOL * field.max_modal().max(f64::MIN_POSITIVE) {
            return Err(Error::NotDivergenceFree { residual: div });
        }
    }
    Ok(tendencies(&state.u, &state.w, state.params.model))
}

struct Physical {
    v: [Vec<f64>; 2],
    // d[a][c]: derivative along axis a of component c
    d: [[Vec<f64>; 2]; 2],
}

impl Physical {
    fn of(f: &VectorField) -> Self {
        let c = f.components();
        Physical {
            v: [c[0].to_physical(), c[1].to_physical()],
            d: [
                [c[0].dx().to_physical(), c[1].dx().to_physical()],
                [c[0].dy().to_physical(), c[1].dy().to_physical()],
            ],
        }
    }
}

pub(crate) fn tendencies(u: &VectorField, w: &VectorField, model: Model) -> (VectorField, VectorField) {
    let grid = u.grid();
    let sigma = model.sigma();
    let pu = Physical::of(u);
    let pw = Physical::of(w);
    let n = grid.len();

    let mut du = [vec![0.0; n], vec![0.0; n]];
    let mut dw = [vec![0.0; n], vec![0.0; n]];
    for c in 0..2 {
        for p in 0..n {
            let (u1, u2) = (pu.v[0][p], pu.v[1][p]);
            let (w1, w2) = (pw.v[0][p], pw.v[1][p]);
            let u_grad_u = u1 * pu.d[0][c][p] + u2 * pu.d[1][c][p];
            let w_grad_w = w1 * pw.d[0][c][p] + w2 * pw.d[1][c][p];
            let u_grad_w = u1 * pw.d[0][c][p] + u2 * pw.d[1][c][p];
            let w_grad_u = w1 * pu.d[0][c][p] + w2 * pu.d[1][c][p];
            du[c][p] = -u_grad_u + sigma * w_grad_w;
            dw[c][p] = -u_grad_w + sigma * w_grad_u;
        }
    }
    let to_field = |samples: &[f64]| -> SpectralField {
        let mut f = SpectralField::from_physical(grid, samples).expect("grid-sized buffer");
        f.dealias_in_place();
        f
    };
    let du = VectorField {
        x: to_field(&du[0]),
        y: to_field(&du[1]),
        div_free: false,
    };
    let dw = VectorField {
        x: to_field(&dw[0]),
        y: to_field(&dw[1]),
        div_free: false,
    };
    (du.leray_project(), dw.leray_project())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{make_initial, InitialDataSpec, InitialKind, ModelParams};
    use crate::spectral::make_grid;
    use std::f64::consts::PI;

    fn random_state(model: Model, seed: u64) -> SimState {
        let g = make_grid(32, 32, 4.0).unwrap();
        let spec = InitialDataSpec {
            kind: InitialKind::RandomBand { band_x: 6, band_y: 8 },
            amplitude: 1.0,
            delta_target: None,
            seed,
        };
        make_initial(&spec, &g, ModelParams::new(model, 0.1, 0.1).unwrap()).unwrap().state
    }

    #[test]
    fn zero_state_gives_zero_rhs() {
        let g = make_grid(16, 16, 4.0).unwrap();
        let s = SimState::new(
            VectorField::zeros(&g),
            VectorField::zeros(&g),
            0.0,
            ModelParams::new(Model::Mhd, 0.1, 0.1).unwrap(),
        )
        .unwrap();
        let (du, dw) = nonlinear_rhs(&s).unwrap();
        assert_eq!(du.max_modal(), 0.0);
        assert_eq!(dw.max_modal(), 0.0);
    }

    #[test]
    fn no_coupling_reduces_to_navier_stokes() {
        let mut s = random_state(Model::Mhd, 3);
        s.w = VectorField::zeros(s.grid());
        let (du, dw) = nonlinear_rhs(&s).unwrap();
        let oracle = s.u.advected_by(&s.u).unwrap().leray_project().scale(-1.0);
        let diff = du.sub(&oracle).max_modal();
        assert!(diff <= 1e-13 * oracle.max_modal(), "{diff}");
        assert_eq!(dw.max_modal(), 0.0);
    }

    #[test]
    fn coupling_sign_flips_between_models() {
        let g = make_grid(16, 16, 1.0).unwrap();
        let w = VectorField::new(
            SpectralField::from_fn(&g, |_, y| (2.0 * PI * y).sin()),
            SpectralField::from_fn(&g, |x, _| (4.0 * PI * x).sin()),
        )
        .unwrap();
        // P(w.grad w) = pi [sin(2X+Y) (-3/5, 6/5) + sin(2X-Y) (-3/5, -6/5)]
        let expect = |x: f64, y: f64| {
            let (p, m) = ((2.0 * PI * (2.0 * x + y)).sin(), (2.0 * PI * (2.0 * x - y)).sin());
            (PI * (-0.6 * p - 0.6 * m), PI * (1.2 * p - 1.2 * m))
        };
        for (model, sigma) in [(Model::Mhd, 1.0), (Model::Tcm, -1.0)] {
            let s = SimState::new(
                VectorField::zeros(&g),
                w.clone(),
                0.0,
                ModelParams::new(model, 0.0, 0.0).unwrap(),
            )
            .unwrap();
            let (du, dw) = nonlinear_rhs(&s).unwrap();
            let (px, py) = (du.x.to_physical(), du.y.to_physical());
            for i in 0..16 {
                for j in 0..16 {
                    let (ex, ey) = expect(g.x(i), g.y(j));
                    assert!((px[g.index(i, j)] - sigma * ex).abs() < 1e-12);
                    assert!((py[g.index(i, j)] - sigma * ey).abs() < 1e-12);
                }
            }
            assert!(dw.max_modal() < 1e-14);
        }
    }

    #[test]
    fn tendencies_are_divergence_free() {
        for model in [Model::Mhd, Model::Tcm] {
            let s = random_state(model, 11);
            let (du, dw) = nonlinear_rhs(&s).unwrap();
            assert!(du.max_modal_divergence() <= 1e-12 * du.max_modal());
            assert!(dw.max_modal_divergence() <= 1e-12 * dw.max_modal());
        }
    }

    #[test]
    fn compressible_input_is_rejected() {
        let g = make_grid(16, 16, 1.0).unwrap();
        let u = VectorField::new(
            SpectralField::from_fn(&g, |x, _| (2.0 * PI * x).cos()),
            SpectralField::zeros(&g),
        )
        .unwrap();
        let s = SimState::new(u, VectorField::zeros(&g), 0.0, ModelParams::new(Model::Mhd, 0.0, 0.0).unwrap()).unwrap();
        assert!(matches!(nonlinear_rhs(&s), Err(Error::NotDivergenceFree { .. })));
    }
}
