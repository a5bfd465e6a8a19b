//! x-average / oscillation splitting `f = f_bar(y) + f_tilde(x, y)` and the
//! anisotropic Lebesgue norms `L^q_y L^p_x`.
//!
//! On the grid the x-average is exactly the `n_x = 0` column of the Fourier
//! coefficients, so the split is a pair of complementary coordinate
//! projections.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField, VectorField};

/// Sharp Poincare constant of the unit torus, `1 / (2 pi)`.
pub const POINCARE_CONSTANT: f64 = 1.0 / (2.0 * std::f64::consts::PI);

/// Constant used for the Agmon-type interpolation bound.
pub const AGMON_CONSTANT: f64 = std::f64::consts::SQRT_2;

/// A field split into its x-average profile and oscillating remainder.
#[derive(Debug, Clone)]
pub struct SplitField {
    /// `f_bar(y_j)` at the grid nodes.
    pub bar: Vec<f64>,
    /// The `n_x = 0` Fourier column backing `bar`.
    bar_coeffs: Vec<Complex64>,
    /// `f_tilde`, with an identically zero `n_x = 0` column.
    pub tilde: SpectralField,
}

impl SplitField {
    pub fn grid(&self) -> &Grid {
        self.tilde.grid()
    }

    /// `f_bar` embedded as an x-independent field on the full grid.
    pub fn bar_field(&self) -> SpectralField {
        let g = self.grid();
        let mut out = SpectralField::zeros(g);
        out.coeffs_mut()[..g.ny()].copy_from_slice(&self.bar_coeffs);
        out
    }

    pub fn reconstruct(&self) -> SpectralField {
        let mut out = self.tilde.clone();
        out.coeffs_mut()[..self.grid().ny()].copy_from_slice(&self.bar_coeffs);
        out
    }
}

/// Splits `f` into x-average and oscillation.
pub fn split(f: &SpectralField) -> SplitField {
    let g = f.grid();
    let ny = g.ny();
    // row i = 0 of the coefficient array is the n_x = 0 column
    let bar_coeffs = f.coeffs()[..ny].to_vec();
    let mut tilde = f.clone();
    tilde.coeffs_mut()[..ny].fill(Complex64::default());
    let mut split = SplitField {
        bar: Vec::new(),
        bar_coeffs,
        tilde,
    };
    let physical = split.bar_field().to_physical();
    split.bar = physical[..ny].to_vec();
    split
}

/// `f_bar` as an x-independent field.
pub fn bar_part(f: &SpectralField) -> SpectralField {
    f.filter(|i, _| i == 0)
}

/// `f_tilde = f - f_bar`.
pub fn tilde_part(f: &SpectralField) -> SpectralField {
    f.filter(|i, _| i != 0)
}

pub fn bar_vector(w: &VectorField) -> VectorField {
    VectorField {
        x: bar_part(&w.x),
        y: bar_part(&w.y),
        div_free: false,
    }
}

pub fn tilde_vector(w: &VectorField) -> VectorField {
    VectorField {
        x: tilde_part(&w.x),
        y: tilde_part(&w.y),
        div_free: false,
    }
}

/// Lebesgue exponent supported by the anisotropic norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exponent {
    Two,
    Infinity,
}

impl TryFrom<f64> for Exponent {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        if p == 2.0 {
            Ok(Exponent::Two)
        } else if p == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else {
            Err(Error::invalid("exponent", format!("unsupported Lebesgue exponent {p}")))
        }
    }
}

fn reduce(values: impl Iterator<Item = f64>, p: Exponent, weight: f64) -> f64 {
    match p {
        Exponent::Two => (values.map(|v| v * v).sum::<f64>() * weight).sqrt(),
        Exponent::Infinity => values.fold(0.0, |m, v| m.max(v.abs())),
    }
}

/// `|| || f ||_{L^p_x} ||_{L^q_y}` by grid quadrature.
pub fn anisotropic_norm(f: &SpectralField, p_x: Exponent, q_y: Exponent) -> f64 {
    let g = f.grid();
    let samples = f.to_physical();
    let inner: Vec<f64> = (0..g.ny())
        .map(|j| reduce((0..g.nx()).map(|i| samples[g.index(i, j)]), p_x, g.dx()))
        .collect();
    reduce(inner.into_iter(), q_y, g.dy())
}

/// Same as [`anisotropic_norm`] with exponents given as numbers (`2` or
/// `f64::INFINITY`).
pub fn anisotropic_norm_pq(f: &SpectralField, p_x: f64, q_y: f64) -> Result<f64> {
    Ok(anisotropic_norm(f, p_x.try_into()?, q_y.try_into()?))
}

/// `||f_tilde||_{L^2} / ||d1 f_tilde||_{L^2}`, or 0 when `f_tilde = 0`.
pub fn poincare_ratio(f: &SpectralField) -> f64 {
    let tilde = tilde_part(f);
    let den = tilde.dx().l2_norm();
    if den == 0.0 {
        return 0.0;
    }
    tilde.l2_norm() / den
}

/// Worst line-wise ratio
/// `||f_tilde(., y)||_{L^inf_x} / (||f_tilde(., y)||_{L^2_x} ||d1 f_tilde(., y)||_{L^2_x})^{1/2}`.
///
/// Lines on which `f_tilde` vanishes to round-off are skipped.
pub fn agmon_ratio(f: &SpectralField) -> Result<f64> {
    let g = f.grid();
    let tilde = tilde_part(f);
    let scale = tilde.max_modal();
    if scale == 0.0 {
        return Err(Error::invalid("f", "oscillating part is identically zero"));
    }
    let vals = tilde.to_physical();
    let dvals = tilde.dx().to_physical();
    let floor = 1e-13 * tilde.max_abs();
    let mut worst: f64 = 0.0;
    for j in 0..g.ny() {
        let line = (0..g.nx()).map(|i| vals[g.index(i, j)]);
        let sup = reduce(line.clone(), Exponent::Infinity, g.dx());
        if sup <= floor {
            continue;
        }
        let l2 = reduce(line, Exponent::Two, g.dx());
        let dl2 = reduce((0..g.nx()).map(|i| dvals[g.index(i, j)]), Exponent::Two, g.dx());
        worst = worst.max(sup / (l2 * dl2).sqrt());
    }
    Ok(worst)
}

/// Residuals of the divergence-free structure of the split velocity.
#[derive(Debug, Clone)]
pub struct MeanFlowReport {
    /// `max_y |u2_bar|`.
    pub bar_u2: f64,
    /// `max_y |d2 u2_bar|`.
    pub dy_bar_u2: f64,
    /// Largest modal divergence of `u_tilde`.
    pub tilde_divergence: f64,
    /// Field scale used to normalize the residuals (largest modal magnitude).
    pub scale: f64,
    pub tolerance: f64,
}

impl MeanFlowReport {
    pub fn passed(&self) -> bool {
        let limit = self.tolerance * self.scale;
        self.bar_u2 <= limit && self.dy_bar_u2 <= limit && self.tilde_divergence <= limit
    }

    pub fn worst_relative(&self) -> f64 {
        if self.scale == 0.0 {
            return 0.0;
        }
        self.bar_u2.max(self.dy_bar_u2).max(self.tilde_divergence) / self.scale
    }
}

/// Checks `u2_bar = 0`, `d2 u2_bar = 0` and `div u_tilde = 0` for a velocity
/// that should be divergence-free with zero-mean second component.
///
/// Violations are reported through [`MeanFlowReport::passed`], never as errors.
pub fn check_mean_flow(u: &VectorField) -> MeanFlowReport {
    let bar_u2 = bar_part(&u.y);
    let tilde = tilde_vector(u);
    MeanFlowReport {
        bar_u2: bar_u2.max_abs(),
        dy_bar_u2: bar_u2.dy().max_abs(),
        tilde_divergence: tilde.max_modal_divergence(),
        scale: u.max_modal(),
        tolerance: 1e-12,
    }
}
