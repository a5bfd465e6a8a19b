use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Period of the x-direction. The horizontal torus is always `[0, 1)`.
pub const LX: f64 = 1.0;

/// Axis selector for derivatives and norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

struct Plans {
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    fwd_y: Arc<dyn Fft<f64>>,
    inv_y: Arc<dyn Fft<f64>>,
}

/// Discretization of the doubly periodic box `[0,1) x [0,Ly)`.
///
/// Arrays over the grid (physical samples and Fourier coefficients alike)
/// are stored row-major with x as the slow index: entry `(i, j)` lives at
/// `i * ny + j`. For coefficients, storage index `i` maps to the signed mode
/// `n_x = i` for `i < nx/2` and `n_x = i - nx` otherwise.
#[derive(Clone)]
pub struct Grid {
    nx: usize,
    ny: usize,
    ly: f64,
    kx: Vec<f64>,
    ky: Vec<f64>,
    plans: Arc<Plans>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("nx", &self.nx)
            .field("ny", &self.ny)
            .field("ly", &self.ly)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.nx == other.nx && self.ny == other.ny && self.ly == other.ly
    }
}

/// Builds a grid with `nx x ny` modes on `[0,1) x [0,ly)`.
pub fn make_grid(nx: usize, ny: usize, ly: f64) -> Result<Grid> {
    Grid::new(nx, ny, ly)
}

fn signed_mode(index: usize, n: usize) -> i64 {
    if index < n / 2 {
        index as i64
    } else {
        index as i64 - n as i64
    }
}

impl Grid {
    pub fn new(nx: usize, ny: usize, ly: f64) -> Result<Self> {
        for (name, n) in [("nx", nx), ("ny", ny)] {
            if n < 4 || n % 2 != 0 {
                return Err(Error::InvalidGrid(format!(
                    "{name} = {n} must be even and at least 4"
                )));
            }
        }
        if !(ly.is_finite() && ly > 0.0) {
            return Err(Error::InvalidGrid(format!("ly = {ly} must be positive")));
        }
        let kx = (0..nx)
            .map(|i| 2.0 * PI * signed_mode(i, nx) as f64 / LX)
            .collect();
        let ky = (0..ny)
            .map(|j| 2.0 * PI * signed_mode(j, ny) as f64 / ly)
            .collect();
        let mut planner = FftPlanner::new();
        let plans = Plans {
            fwd_x: planner.plan_fft_forward(nx),
            inv_x: planner.plan_fft_inverse(nx),
            fwd_y: planner.plan_fft_forward(ny),
            inv_y: planner.plan_fft_inverse(ny),
        };
        Ok(Grid {
            nx,
            ny,
            ly,
            kx,
            ky,
            plans: Arc::new(plans),
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn lx(&self) -> f64 {
        LX
    }

    pub fn ly(&self) -> f64 {
        self.ly
    }

    /// Number of grid points (and of Fourier coefficients).
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Domain area `Lx * Ly`.
    pub fn area(&self) -> f64 {
        LX * self.ly
    }

    pub fn dx(&self) -> f64 {
        LX / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.ly / self.ny as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        j as f64 * self.dy()
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.ny + j
    }

    /// Signed x-mode number of storage row `i`.
    #[inline]
    pub fn mode_x(&self, i: usize) -> i64 {
        signed_mode(i, self.nx)
    }

    /// Signed y-mode number of storage column `j`.
    #[inline]
    pub fn mode_y(&self, j: usize) -> i64 {
        signed_mode(j, self.ny)
    }

    /// Storage index of the signed mode pair, if it is representable.
    pub fn mode_index(&self, mx: i64, my: i64) -> Option<usize> {
        let half_x = (self.nx / 2) as i64;
        let half_y = (self.ny / 2) as i64;
        if mx < -half_x || mx >= half_x || my < -half_y || my >= half_y {
            return None;
        }
        let i = mx.rem_euclid(self.nx as i64) as usize;
        let j = my.rem_euclid(self.ny as i64) as usize;
        Some(self.index(i, j))
    }

    /// Storage index of the conjugate partner `-n` of entry `(i, j)`.
    #[inline]
    pub fn conjugate_index(&self, i: usize, j: usize) -> usize {
        self.index((self.nx - i) % self.nx, (self.ny - j) % self.ny)
    }

    /// Wavenumbers `2 pi n_x / Lx`, indexed by storage row.
    pub fn kx(&self) -> &[f64] {
        &self.kx
    }

    /// Wavenumbers `2 pi n_y / Ly`, indexed by storage column.
    pub fn ky(&self) -> &[f64] {
        &self.ky
    }

    pub fn is_nyquist_x(&self, i: usize) -> bool {
        i == self.nx / 2
    }

    pub fn is_nyquist_y(&self, j: usize) -> bool {
        j == self.ny / 2
    }

    /// Wavenumber used by odd-order derivatives: the Nyquist mode has no
    /// resolvable odd derivative and maps to zero.
    #[inline]
    pub fn kx_odd(&self, i: usize) -> f64 {
        if self.is_nyquist_x(i) {
            0.0
        } else {
            self.kx[i]
        }
    }

    #[inline]
    pub fn ky_odd(&self, j: usize) -> f64 {
        if self.is_nyquist_y(j) {
            0.0
        } else {
            self.ky[j]
        }
    }

    /// Whether the mode at `(i, j)` survives the 2/3-rule truncation.
    ///
    /// A mode is kept when `3|n| < N` in both directions. For `N` not
    /// divisible by three this is the same set as `|n| <= N/3`.
    #[inline]
    pub fn is_retained(&self, i: usize, j: usize) -> bool {
        3 * self.mode_x(i).unsigned_abs() < self.nx as u64
            && 3 * self.mode_y(j).unsigned_abs() < self.ny as u64
    }

    /// Euclidean wavenumber magnitude `|k|` of entry `(i, j)`.
    #[inline]
    pub fn k_norm(&self, i: usize, j: usize) -> f64 {
        self.kx[i].hypot(self.ky[j])
    }

    pub(crate) fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, &self.plans.fwd_x, &self.plans.fwd_y);
        let scale = 1.0 / self.len() as f64;
        data.iter_mut().for_each(|c| *c *= scale);
    }

    pub(crate) fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &self.plans.inv_x, &self.plans.inv_y);
    }

    fn transform(&self, data: &mut [Complex64], along_x: &Arc<dyn Fft<f64>>, along_y: &Arc<dyn Fft<f64>>) {
        debug_assert_eq!(data.len(), self.len());
        // rows (fixed x) are contiguous
        along_y.process(data);
        let mut column = vec![Complex64::default(); self.nx];
        for j in 0..self.ny {
            for (i, c) in column.iter_mut().enumerate() {
                *c = data[i * self.ny + j];
            }
            along_x.process(&mut column);
            for (i, c) in column.iter().enumerate() {
                data[i * self.ny + j] = *c;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumbers_cover_symmetric_range() {
        let g = make_grid(8, 8, 1.0).unwrap();
        let modes: Vec<i64> = (0..8).map(|i| g.mode_x(i)).collect();
        assert_eq!(modes, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        let mut kx = g.kx().to_vec();
        kx.sort_by(f64::total_cmp);
        for (k, n) in kx.iter().zip(-4..4) {
            assert!((k - 2.0 * PI * n as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn ky_spacing_follows_ly() {
        let g = make_grid(8, 8, 4.0).unwrap();
        assert!((g.ky()[1] - PI / 2.0).abs() < 1e-15);
        assert_eq!(g.lx(), 1.0);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(make_grid(7, 8, 1.0).is_err());
        assert!(make_grid(8, 2, 1.0).is_err());
        assert!(make_grid(8, 8, 0.0).is_err());
        assert!(make_grid(8, 8, -1.0).is_err());
    }

    #[test]
    fn mode_index_round_trips() {
        let g = make_grid(8, 6, 2.0).unwrap();
        for i in 0..8 {
            for j in 0..6 {
                let idx = g.mode_index(g.mode_x(i), g.mode_y(j)).unwrap();
                assert_eq!(idx, g.index(i, j));
            }
        }
        assert!(g.mode_index(4, 0).is_none());
    }

    #[test]
    fn dealias_cutoff_on_eight_points() {
        let g = make_grid(8, 8, 1.0).unwrap();
        assert!(g.is_retained(1, 0));
        assert!(g.is_retained(2, 2));
        assert!(!g.is_retained(3, 0));
        assert!(!g.is_retained(4, 0));
    }
}
