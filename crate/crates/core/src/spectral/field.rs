use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use super::grid::{Axis, Grid};
use crate::error::{Error, Result};

/// A real scalar field stored as Fourier coefficients on a [`Grid`].
///
/// The forward transform divides by `nx * ny`, so the `(0, 0)` coefficient is
/// the mean of the field. Coefficients of a real field satisfy
/// `c(-n) = conj(c(n))`.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: &Grid) -> Self {
        SpectralField {
            grid: grid.clone(),
            coeffs: vec![Complex64::default(); grid.len()],
        }
    }

    /// Wraps a coefficient array laid out as described on [`Grid`].
    pub fn from_coeffs(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        Ok(SpectralField {
            grid: grid.clone(),
            coeffs,
        })
    }

    /// Forward transform of physical samples (row-major, x slow).
    pub fn from_physical(grid: &Grid, samples: &[f64]) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                got: samples.len(),
            });
        }
        let mut coeffs: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        grid.forward(&mut coeffs);
        Ok(SpectralField {
            grid: grid.clone(),
            coeffs,
        })
    }

    /// Samples `f(x_i, y_j)` on the grid nodes and transforms them.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut samples = Vec::with_capacity(grid.len());
        for i in 0..grid.nx() {
            for j in 0..grid.ny() {
                samples.push(f(grid.x(i), grid.y(j)));
            }
        }
        Self::from_physical(grid, &samples).expect("sample count matches grid")
    }

    /// Inverse transform to physical samples.
    pub fn to_physical(&self) -> Vec<f64> {
        let mut data = self.coeffs.clone();
        self.grid.inverse(&mut data);
        data.into_iter().map(|c| c.re).collect()
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of the signed mode `(mx, my)`; zero if not representable.
    pub fn mode(&self, mx: i64, my: i64) -> Complex64 {
        self.grid
            .mode_index(mx, my)
            .map(|idx| self.coeffs[idx])
            .unwrap_or_default()
    }

    /// Sets the coefficient of `(mx, my)` and its conjugate partner so the
    /// field stays real.
    pub fn set_mode(&mut self, mx: i64, my: i64, value: Complex64) -> Result<()> {
        let idx = self
            .grid
            .mode_index(mx, my)
            .ok_or_else(|| Error::invalid("mode", format!("({mx}, {my}) not on grid")))?;
        // partner may wrap onto the Nyquist row or column
        let partner = self
            .grid
            .conjugate_index(idx / self.grid.ny(), idx % self.grid.ny());
        if partner == idx {
            self.coeffs[idx] = Complex64::new(value.re, 0.0);
        } else {
            self.coeffs[idx] = value;
            self.coeffs[partner] = value.conj();
        }
        Ok(())
    }

    /// Mean value of the field (the `(0, 0)` coefficient).
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// Largest coefficient modulus.
    pub fn max_modal(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus of the conjugate-symmetry defect `c(-n) - conj(c(n))`.
    pub fn symmetry_defect(&self) -> f64 {
        let g = &self.grid;
        let mut worst: f64 = 0.0;
        for i in 0..g.nx() {
            for j in 0..g.ny() {
                let a = self.coeffs[g.index(i, j)];
                let b = self.coeffs[g.conjugate_index(i, j)];
                worst = worst.max((a - b.conj()).norm());
            }
        }
        worst
    }

    fn check_grid(&self, other: &SpectralField) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Applies `(i k_axis)^order` coefficient-wise.
    ///
    /// Odd orders annihilate the Nyquist mode along `axis`, whose odd
    /// derivative vanishes at every grid node.
    pub fn derivative(&self, axis: Axis, order: u32) -> SpectralField {
        let g = &self.grid;
        let mut out = self.clone();
        if order == 0 {
            return out;
        }
        for i in 0..g.nx() {
            for j in 0..g.ny() {
                let k = match (axis, order % 2 == 1) {
                    (Axis::X, true) => g.kx_odd(i),
                    (Axis::X, false) => g.kx()[i],
                    (Axis::Y, true) => g.ky_odd(j),
                    (Axis::Y, false) => g.ky()[j],
                };
                let factor = Complex64::new(0.0, k).powu(order);
                out.coeffs[g.index(i, j)] *= factor;
            }
        }
        out
    }

    pub fn dx(&self) -> SpectralField {
        self.derivative(Axis::X, 1)
    }

    pub fn dy(&self) -> SpectralField {
        self.derivative(Axis::Y, 1)
    }

    /// 2/3-rule truncation.
    pub fn dealias(&self) -> SpectralField {
        let mut out = self.clone();
        out.dealias_in_place();
        out
    }

    pub fn dealias_in_place(&mut self) {
        let g = &self.grid;
        for i in 0..g.nx() {
            for j in 0..g.ny() {
                if !g.is_retained(i, j) {
                    self.coeffs[g.index(i, j)] = Complex64::default();
                }
            }
        }
    }

    /// Dealiased pointwise product, formed in physical space.
    pub fn multiply(&self, other: &SpectralField) -> Result<SpectralField> {
        self.check_grid(other)?;
        let a = self.to_physical();
        let b = other.to_physical();
        let prod: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        let mut out = SpectralField::from_physical(&self.grid, &prod)?;
        out.dealias_in_place();
        Ok(out)
    }

    /// `sum |c|^2`, the mean of the squared field.
    pub fn mean_square(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `||f||_{L^2}^2` over the whole box.
    pub fn l2_norm_sq(&self) -> f64 {
        self.grid.area() * self.mean_square()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// `int f g` over the box, via Parseval.
    pub fn inner(&self, other: &SpectralField) -> Result<f64> {
        self.check_grid(other)?;
        let s: f64 = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a * b.conj()).re)
            .sum();
        Ok(self.grid.area() * s)
    }

    /// Grid maximum of `|f|`.
    pub fn max_abs(&self) -> f64 {
        self.to_physical().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Keeps coefficients for which `keep(i, j)` holds and zeros the rest.
    pub fn filter(&self, keep: impl Fn(usize, usize) -> bool) -> SpectralField {
        let g = &self.grid;
        let mut out = self.clone();
        for i in 0..g.nx() {
            for j in 0..g.ny() {
                if !keep(i, j) {
                    out.coeffs[g.index(i, j)] = Complex64::default();
                }
            }
        }
        out
    }

    pub fn scale(&self, a: f64) -> SpectralField {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= a);
        out
    }

    /// `self += a * other` on matching grids.
    pub fn axpy(&mut self, a: f64, other: &SpectralField) {
        debug_assert!(self.grid == other.grid);
        for (c, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *c += o * a;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// Forward transform; see [`SpectralField::from_physical`].
pub fn to_spectral(grid: &Grid, samples: &[f64]) -> Result<SpectralField> {
    SpectralField::from_physical(grid, samples)
}

/// Inverse transform; see [`SpectralField::to_physical`].
pub fn from_spectral(f: &SpectralField) -> Vec<f64> {
    f.to_physical()
}

pub fn derivative(f: &SpectralField, axis: Axis, order: u32) -> SpectralField {
    f.derivative(axis, order)
}

pub fn dealias(f: &SpectralField) -> SpectralField {
    f.dealias()
}

pub fn multiply(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    f.multiply(g)
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&SpectralField> for SpectralField {
    fn add_assign(&mut self, rhs: &SpectralField) {
        assert!(self.grid == rhs.grid, "grid mismatch");
        for (c, o) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *c += o;
        }
    }
}

impl SubAssign<&SpectralField> for SpectralField {
    fn sub_assign(&mut self, rhs: &SpectralField) {
        assert!(self.grid == rhs.grid, "grid mismatch");
        for (c, o) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *c -= o;
        }
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, a: f64) -> SpectralField {
        self.scale(a)
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::spectral::make_grid;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-13
    }

    #[test]
    fn constant_field_has_only_mean() {
        let g = make_grid(8, 8, 1.0).unwrap();
        let f = SpectralField::from_physical(&g, &vec![1.0; 64]).unwrap();
        assert!(close(f.mode(0, 0), Complex64::new(1.0, 0.0)));
        let rest: f64 = f.coeffs()[1..].iter().map(|c| c.norm()).sum();
        assert!(rest < 1e-14);
    }

    #[test]
    fn cosine_splits_into_two_halves() {
        let g = make_grid(8, 8, 1.0).unwrap();
        let f = SpectralField::from_fn(&g, |x, _| (2.0 * PI * x).cos());
        assert!(close(f.mode(1, 0), Complex64::new(0.5, 0.0)));
        assert!(close(f.mode(-1, 0), Complex64::new(0.5, 0.0)));
        let total: f64 = f.coeffs().iter().map(|c| c.norm()).sum();
        assert!((total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let g = make_grid(8, 8, 1.0).unwrap();
        assert!(matches!(
            SpectralField::from_physical(&g, &[0.0; 10]),
            Err(Error::ShapeMismatch { expected: 64, got: 10 })
        ));
    }

    #[test]
    fn derivative_of_cosine() {
        let g = make_grid(16, 16, 1.0).unwrap();
        let f = SpectralField::from_fn(&g, |x, _| (2.0 * PI * x).cos());
        let df = f.derivative(Axis::X, 1).to_physical();
        for i in 0..16 {
            for j in 0..16 {
                let want = -2.0 * PI * (2.0 * PI * g.x(i)).sin();
                assert!((df[g.index(i, j)] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn second_y_derivative_of_sine() {
        let ly = 4.0;
        let g = make_grid(8, 16, ly).unwrap();
        let f = SpectralField::from_fn(&g, |_, y| (2.0 * PI * y / ly).sin());
        let d2 = f.derivative(Axis::Y, 2).to_physical();
        let k = 2.0 * PI / ly;
        for i in 0..8 {
            for j in 0..16 {
                let want = -k * k * (2.0 * PI * g.y(j) / ly).sin();
                assert!((d2[g.index(i, j)] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dealias_drops_high_modes() {
        let g = make_grid(8, 8, 1.0).unwrap();
        let mut f = SpectralField::zeros(&g);
        f.set_mode(1, 0, Complex64::new(0.5, 0.0)).unwrap();
        let d = f.dealias();
        assert!(d.coeffs().iter().zip(f.coeffs()).all(|(a, b)| close(*a, *b)));

        let mut h = SpectralField::zeros(&g);
        h.set_mode(3, 0, Complex64::new(0.5, 0.0)).unwrap();
        assert!(h.dealias().max_modal() == 0.0);
    }

    #[test]
    fn cosine_squared_product() {
        let g = make_grid(16, 8, 1.0).unwrap();
        let f = SpectralField::from_fn(&g, |x, _| (2.0 * PI * x).cos());
        let p = f.multiply(&f).unwrap();
        assert!(close(p.mode(0, 0), Complex64::new(0.5, 0.0)));
        assert!(close(p.mode(2, 0), Complex64::new(0.25, 0.0)));
        assert!(close(p.mode(-2, 0), Complex64::new(0.25, 0.0)));
    }

    #[test]
    fn product_with_one_is_dealias() {
        let g = make_grid(12, 12, 2.0).unwrap();
        let f = SpectralField::from_fn(&g, |x, y| (2.0 * PI * 5.0 * x).sin() + (PI * y).cos() + x * y);
        let one = SpectralField::from_physical(&g, &vec![1.0; g.len()]).unwrap();
        let p = f.multiply(&one).unwrap();
        let d = f.dealias();
        for (a, b) in p.coeffs().iter().zip(d.coeffs()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn set_mode_keeps_field_real() {
        let g = make_grid(8, 8, 1.0).unwrap();
        let mut f = SpectralField::zeros(&g);
        f.set_mode(2, -3, Complex64::new(0.3, -0.7)).unwrap();
        f.set_mode(-4, 1, Complex64::new(0.1, 0.2)).unwrap();
        assert!(f.symmetry_defect() < 1e-15);
        assert!(f.set_mode(4, 0, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn grid_mismatch_in_product() {
        let a = SpectralField::zeros(&make_grid(8, 8, 1.0).unwrap());
        let b = SpectralField::zeros(&make_grid(8, 8, 2.0).unwrap());
        assert!(matches!(a.multiply(&b), Err(Error::GridMismatch)));
    }
}
