use num_complex::Complex64;

use super::field::SpectralField;
use super::grid::Grid;
use crate::error::{Error, Result};

/// Relative modal tolerance for declaring a field divergence-free.
pub const DIV_FREE_TOL: f64 = 1e-12;

/// A planar vector field `(w1, w2)`.
#[derive(Debug, Clone)]
pub struct VectorField {
    pub x: SpectralField,
    pub y: SpectralField,
    /// Set when the field is known to satisfy the divergence-free contract.
    pub div_free: bool,
}

impl VectorField {
    pub fn new(x: SpectralField, y: SpectralField) -> Result<Self> {
        if x.grid() != y.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(VectorField {
            x,
            y,
            div_free: false,
        })
    }

    pub fn zeros(grid: &Grid) -> Self {
        VectorField {
            x: SpectralField::zeros(grid),
            y: SpectralField::zeros(grid),
            div_free: true,
        }
    }

    pub fn grid(&self) -> &Grid {
        self.x.grid()
    }

    pub fn components(&self) -> [&SpectralField; 2] {
        [&self.x, &self.y]
    }

    /// `d1 w1 + d2 w2`.
    pub fn divergence(&self) -> SpectralField {
        let mut d = self.x.dx();
        d += &self.y.dy();
        d
    }

    /// Largest modulus of `i k . w(k)` over all modes.
    pub fn max_modal_divergence(&self) -> f64 {
        self.divergence().max_modal()
    }

    pub fn max_modal(&self) -> f64 {
        self.x.max_modal().max(self.y.max_modal())
    }

    /// Checks the divergence-free contract against [`DIV_FREE_TOL`] and
    /// updates the flag.
    pub fn check_div_free(&mut self) -> bool {
        let scale = self.max_modal();
        self.div_free = self.max_modal_divergence() <= DIV_FREE_TOL * scale.max(f64::MIN_POSITIVE);
        self.div_free
    }

    /// Applies `I - k k^T / |k|^2` mode by mode; the `k = 0` mode passes
    /// through unchanged.
    ///
    /// The wavevector is the one used by first derivatives, so the result
    /// has zero discrete divergence on every mode, Nyquist modes included.
    pub fn leray_project(&self) -> VectorField {
        let g = self.grid().clone();
        let mut px = self.x.clone();
        let mut py = self.y.clone();
        let (cx, cy) = (px.coeffs_mut(), py.coeffs_mut());
        for i in 0..g.nx() {
            let kx = g.kx_odd(i);
            for j in 0..g.ny() {
                let ky = g.ky_odd(j);
                let k2 = kx * kx + ky * ky;
                if k2 == 0.0 {
                    continue;
                }
                let idx = g.index(i, j);
                let kdotw: Complex64 = cx[idx] * kx + cy[idx] * ky;
                cx[idx] -= kdotw * (kx / k2);
                cy[idx] -= kdotw * (ky / k2);
            }
        }
        VectorField {
            x: px,
            y: py,
            div_free: true,
        }
    }

    pub fn dealias(&self) -> VectorField {
        VectorField {
            x: self.x.dealias(),
            y: self.y.dealias(),
            div_free: self.div_free,
        }
    }

    /// `(a . grad) self`, each product dealiased.
    pub fn advected_by(&self, a: &VectorField) -> Result<VectorField> {
        let comp = |f: &SpectralField| -> Result<SpectralField> {
            let mut out = a.x.multiply(&f.dx())?;
            out += &a.y.multiply(&f.dy())?;
            Ok(out)
        };
        Ok(VectorField {
            x: comp(&self.x)?,
            y: comp(&self.y)?,
            div_free: false,
        })
    }

    /// `int w . v` over the box.
    pub fn inner(&self, other: &VectorField) -> Result<f64> {
        Ok(self.x.inner(&other.x)? + self.y.inner(&other.y)?)
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.x.l2_norm_sq() + self.y.l2_norm_sq()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// Applies `f` to both components.
    pub fn map(&self, f: impl Fn(&SpectralField) -> SpectralField) -> VectorField {
        VectorField {
            x: f(&self.x),
            y: f(&self.y),
            div_free: false,
        }
    }

    pub fn scale(&self, a: f64) -> VectorField {
        VectorField {
            x: self.x.scale(a),
            y: self.y.scale(a),
            div_free: self.div_free,
        }
    }

    pub fn axpy(&mut self, a: f64, other: &VectorField) {
        self.x.axpy(a, &other.x);
        self.y.axpy(a, &other.y);
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        VectorField {
            x: &self.x - &other.x,
            y: &self.y - &other.y,
            div_free: false,
        }
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField {
            x: &self.x + &other.x,
            y: &self.y + &other.y,
            div_free: false,
        }
    }

    /// Grid maximum of the pointwise magnitude `|w|`.
    pub fn max_speed(&self) -> f64 {
        let a = self.x.to_physical();
        let b = self.y.to_physical();
        a.iter()
            .zip(&b)
            .map(|(p, q)| p.hypot(*q))
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

pub fn divergence(w: &VectorField) -> SpectralField {
    w.divergence()
}

pub fn leray_project(w: &VectorField) -> VectorField {
    w.leray_project()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::spectral::make_grid;

    fn vf(g: &Grid, fx: impl Fn(f64, f64) -> f64, fy: impl Fn(f64, f64) -> f64) -> VectorField {
        VectorField::new(SpectralField::from_fn(g, fx), SpectralField::from_fn(g, fy)).unwrap()
    }

    #[test]
    fn divergence_examples() {
        let g = make_grid(16, 16, 1.0).unwrap();
        let shear = vf(&g, |_, y| 0.7 * (2.0 * PI * y).cos(), |_, _| 0.0);
        assert!(shear.max_modal_divergence() < 1e-13);

        let w = vf(&g, |x, _| (2.0 * PI * x).cos(), |_, _| 0.0);
        let d = w.divergence().to_physical();
        for i in 0..16 {
            let want = -2.0 * PI * (2.0 * PI * g.x(i)).sin();
            assert!((d[g.index(i, 3)] - want).abs() < 1e-12);
        }

        let cell = vf(&g, |_, y| (2.0 * PI * y).sin(), |x, _| (2.0 * PI * x).sin());
        assert!(cell.max_modal_divergence() < 1e-13);
    }

    #[test]
    fn projector_kills_gradients() {
        let g = make_grid(16, 16, 2.0).unwrap();
        let phi = SpectralField::from_fn(&g, |x, y| (2.0 * PI * x).sin() * (PI * y).cos() + (4.0 * PI * x).cos());
        let grad = VectorField::new(phi.dx(), phi.dy()).unwrap();
        assert!(grad.leray_project().max_modal() < 1e-13);
    }

    #[test]
    fn single_parallel_mode_is_removed() {
        // (cos 2 pi x, 0): coefficients 1/2 at n = (+-1, 0), k parallel to w
        let g = make_grid(8, 8, 1.0).unwrap();
        let w = vf(&g, |x, _| (2.0 * PI * x).cos(), |_, _| 0.0);
        let p = w.leray_project();
        assert!(p.max_modal() < 1e-15);
    }

    #[test]
    fn mean_flow_passes_through() {
        let g = make_grid(8, 8, 1.0).unwrap();
        let w = vf(&g, |_, _| 0.3, |_, _| -1.2);
        let p = w.leray_project();
        assert!((p.x.mean() - 0.3).abs() < 1e-15);
        assert!((p.y.mean() + 1.2).abs() < 1e-15);
    }
}
