//! Sharp dyadic frequency decomposition on the grid.
//!
//! Frequencies are measured in units of `k0 = 2 pi`, the lowest nonzero
//! x-wavenumber. Block `q >= 0` holds the wavevectors with
//! `(3/4) 2^q <= |k|/k0 < (3/4) 2^(q+1)`; block `-1` holds the ball
//! `|k|/k0 < 3/4`, including `k = 0`. The blocks are indicator functions,
//! so they partition the coefficient array exactly and are mutually
//! orthogonal in `L^2`.

use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

/// Reference wavenumber `k0 = 2 pi`.
pub const K0: f64 = 2.0 * std::f64::consts::PI;

/// Inner radius (in units of `k0`) of block 0.
pub const SHELL_BASE: f64 = 0.75;

/// Shell index of a wavevector with squared normalized length `r2 = |k/k0|^2`.
fn shell_of(r2: f64) -> i32 {
    let mut edge = SHELL_BASE * SHELL_BASE;
    if r2 < edge {
        return -1;
    }
    let mut q = 0;
    // edges are (3/4)^2 4^q, exact in binary
    loop {
        edge *= 4.0;
        if r2 < edge {
            return q;
        }
        q += 1;
    }
}

/// Assignment of every grid wavevector to one dyadic block.
#[derive(Debug, Clone)]
pub struct ShellSystem {
    grid: Grid,
    shell: Vec<i32>,
    r2: Vec<f64>,
    q_max: i32,
}

impl ShellSystem {
    pub fn new(grid: &Grid) -> Self {
        let mut shell = Vec::with_capacity(grid.len());
        let mut r2s = Vec::with_capacity(grid.len());
        for i in 0..grid.nx() {
            let mx = grid.mode_x(i) as f64 / grid.lx();
            for j in 0..grid.ny() {
                let my = grid.mode_y(j) as f64 / grid.ly();
                let r2 = mx * mx + my * my;
                shell.push(shell_of(r2));
                r2s.push(r2);
            }
        }
        let q_max = shell.iter().copied().max().unwrap_or(-1);
        ShellSystem {
            grid: grid.clone(),
            shell,
            r2: r2s,
            q_max,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn q_min(&self) -> i32 {
        -1
    }

    /// Largest block index with a nonempty shell.
    pub fn q_max(&self) -> i32 {
        self.q_max
    }

    /// Block index of storage entry `idx`.
    pub fn shell_at(&self, idx: usize) -> i32 {
        self.shell[idx]
    }

    /// `|k / k0|` of storage entry `idx`.
    pub fn radius_at(&self, idx: usize) -> f64 {
        self.r2[idx].sqrt()
    }

    pub fn is_nonempty(&self, q: i32) -> bool {
        self.shell.contains(&q)
    }

    fn check(&self, f: &SpectralField) -> Result<()> {
        if f.grid() == &self.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    fn keep(&self, f: &SpectralField, pred: impl Fn(i32) -> bool) -> SpectralField {
        let ny = self.grid.ny();
        f.filter(|i, j| pred(self.shell[i * ny + j]))
    }

    /// `Delta_q f`; zero for `q < -1` and for `q` beyond the grid.
    pub fn block(&self, f: &SpectralField, q: i32) -> SpectralField {
        self.keep(f, |s| s == q)
    }

    /// `S_q f = sum_{j=-1}^{q-1} Delta_j f`; zero for `q <= -1`.
    pub fn low_pass(&self, f: &SpectralField, q: i32) -> SpectralField {
        self.keep(f, |s| s < q)
    }

    /// `Delta_{q-1} + Delta_q + Delta_{q+1}`.
    pub fn widened_block(&self, f: &SpectralField, q: i32) -> SpectralField {
        self.keep(f, |s| (s - q).abs() <= 1)
    }

    /// All blocks `Delta_{-1} f, ..., Delta_{q_max} f`.
    pub fn blocks(&self, f: &SpectralField) -> Vec<SpectralField> {
        (-1..=self.q_max).map(|q| self.block(f, q)).collect()
    }

    /// `||f||_{B^s_{p,r}}` from the blocks. `p` is 2 or infinity; `r` is 1, 2
    /// or infinity.
    pub fn besov_norm(&self, f: &SpectralField, s: f64, p: f64, r: f64) -> Result<f64> {
        self.check(f)?;
        if p != 2.0 && p != f64::INFINITY {
            return Err(Error::invalid("p", format!("unsupported integrability {p}")));
        }
        if r != 1.0 && r != 2.0 && r != f64::INFINITY {
            return Err(Error::invalid("r", format!("unsupported summability {r}")));
        }
        let terms = (-1..=self.q_max).map(|q| {
            let b = self.block(f, q);
            let lp = if p == 2.0 { b.l2_norm() } else { b.max_abs() };
            2f64.powf(q as f64 * s) * lp
        });
        Ok(if r == f64::INFINITY {
            terms.fold(0.0, f64::max)
        } else {
            terms.map(|t| t.powf(r)).sum::<f64>().powf(1.0 / r)
        })
    }

    /// `(area * sum_k (1 + |k/k0|^2)^s |f_k|^2)^{1/2}`.
    pub fn sobolev_norm(&self, f: &SpectralField, s: f64) -> f64 {
        let sum: f64 = f
            .coeffs()
            .iter()
            .zip(&self.r2)
            .map(|(c, r2)| (1.0 + r2).powf(s) * c.norm_sqr())
            .sum();
        (self.grid.area() * sum).sqrt()
    }

    /// Bony decomposition `f g = T_f g + T_g f + R(f, g)` with dealiased
    /// products.
    pub fn bony_parts(&self, f: &SpectralField, g: &SpectralField) -> Result<BonyParts> {
        self.check(f)?;
        self.check(g)?;
        let qs: Vec<i32> = (-1..=self.q_max).collect();
        let fb: Vec<SpectralField> = qs.iter().map(|&q| self.block(f, q)).collect();
        let gb: Vec<SpectralField> = qs.iter().map(|&q| self.block(g, q)).collect();
        let mut t_fg = SpectralField::zeros(&self.grid);
        let mut t_gf = SpectralField::zeros(&self.grid);
        let mut rem = SpectralField::zeros(&self.grid);
        for (n, &q) in qs.iter().enumerate() {
            // S_{q-1} is empty for q <= 0
            if q >= 1 {
                t_fg += &self.low_pass(f, q - 1).multiply(&gb[n])?;
                t_gf += &self.low_pass(g, q - 1).multiply(&fb[n])?;
            }
            rem += &fb[n].multiply(&self.widened_block(g, q))?;
        }
        Ok(BonyParts {
            t_fg,
            t_gf,
            remainder: rem,
        })
    }

    /// Bernstein ratio `||grad^k Delta_q f|| / (2^{qk} k0^k ||Delta_q f||)`.
    ///
    /// `||grad^k h||^2 = area * sum |k|^{2k} |h_k|^2` (all partial derivatives
    /// of order `k`).
    pub fn bernstein_ratio(&self, f: &SpectralField, q: i32, order: u32) -> BernsteinRatio {
        let mut num = 0.0;
        let mut den = 0.0;
        for (idx, c) in f.coeffs().iter().enumerate() {
            if self.shell[idx] != q {
                continue;
            }
            let w = c.norm_sqr();
            den += w;
            num += self.r2[idx].powi(order as i32) * w;
        }
        if den == 0.0 {
            return BernsteinRatio { ratio: 0.0, empty: true };
        }
        let scale = 2f64.powi(q * order as i32);
        BernsteinRatio {
            ratio: (num / den).sqrt() / scale,
            empty: false,
        }
    }
}

/// The three Bony pieces of a product.
#[derive(Debug, Clone)]
pub struct BonyParts {
    /// `T_f g = sum_q S_{q-1} f Delta_q g`.
    pub t_fg: SpectralField,
    /// `T_g f`.
    pub t_gf: SpectralField,
    /// `R(f, g) = sum_q Delta_q f (Delta_{q-1} + Delta_q + Delta_{q+1}) g`.
    pub remainder: SpectralField,
}

impl BonyParts {
    pub fn sum(&self) -> SpectralField {
        let mut s = &self.t_fg + &self.t_gf;
        s += &self.remainder;
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernsteinRatio {
    pub ratio: f64,
    /// The block carried no energy; `ratio` is 0 by convention.
    pub empty: bool,
}

pub fn dyadic_block(f: &SpectralField, q: i32) -> SpectralField {
    ShellSystem::new(f.grid()).block(f, q)
}

pub fn low_pass(f: &SpectralField, q: i32) -> SpectralField {
    ShellSystem::new(f.grid()).low_pass(f, q)
}

pub fn besov_norm(f: &SpectralField, s: f64, p: f64, r: f64) -> Result<f64> {
    ShellSystem::new(f.grid()).besov_norm(f, s, p, r)
}

pub fn sobolev_norm(f: &SpectralField, s: f64) -> f64 {
    ShellSystem::new(f.grid()).sobolev_norm(f, s)
}

pub fn bony_parts(f: &SpectralField, g: &SpectralField) -> Result<BonyParts> {
    ShellSystem::new(f.grid()).bony_parts(f, g)
}

pub fn bernstein_ratio(f: &SpectralField, q: i32, order: u32) -> BernsteinRatio {
    ShellSystem::new(f.grid()).bernstein_ratio(f, q, order)
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::spectral::make_grid;

    fn single(g: &Grid, mx: i64, my: i64) -> SpectralField {
        let mut f = SpectralField::zeros(g);
        f.set_mode(mx, my, Complex64::new(0.4, 0.3)).unwrap();
        f
    }

    #[test]
    fn shell_edges() {
        assert_eq!(shell_of(0.0), -1);
        assert_eq!(shell_of(0.5), -1);
        assert_eq!(shell_of(0.5625), 0);
        assert_eq!(shell_of(2.25 - 1e-12), 0);
        assert_eq!(shell_of(2.25), 1);
        assert_eq!(shell_of(9.0), 2);
    }

    #[test]
    fn single_mode_lives_in_one_block() {
        let g = make_grid(16, 16, 1.0).unwrap();
        let sys = ShellSystem::new(&g);
        // |k|/k0 = sqrt(5) ~ 2.24 lies in [1.5, 3): block 1
        let f = single(&g, 2, 1);
        for q in -2..=sys.q_max() + 1 {
            let b = sys.block(&f, q);
            if q == 1 {
                assert!((&b - &f).max_modal() == 0.0);
            } else {
                assert!(b.max_modal() == 0.0);
            }
        }
    }

    #[test]
    fn low_pass_limits() {
        let g = make_grid(16, 16, 4.0).unwrap();
        let sys = ShellSystem::new(&g);
        let f = SpectralField::from_fn(&g, |x, y| (x * 6.0).sin() * (y * 1.3).cos() + x);
        assert!((&sys.low_pass(&f, sys.q_max() + 1) - &f).max_modal() == 0.0);
        assert!((&sys.low_pass(&f, 0) - &sys.block(&f, -1)).max_modal() == 0.0);
        assert!(sys.low_pass(&f, -1).max_modal() == 0.0);
    }

    #[test]
    fn besov_of_single_mode() {
        let g = make_grid(16, 16, 1.0).unwrap();
        let sys = ShellSystem::new(&g);
        let f = single(&g, 2, 1);
        let b = sys.besov_norm(&f, 1.5, 2.0, 2.0).unwrap();
        assert!((b - 2f64.powf(1.5) * f.l2_norm()).abs() < 1e-13);
        assert!(sys.besov_norm(&f, 1.0, 3.0, 2.0).is_err());
        assert!(sys.besov_norm(&f, 1.0, 2.0, 4.0).is_err());
    }

    #[test]
    fn sobolev_of_constant() {
        let g = make_grid(8, 8, 1.0).unwrap();
        let sys = ShellSystem::new(&g);
        let c = SpectralField::from_fn(&g, |_, _| -0.7);
        for s in [0.0, 1.0, 2.5] {
            assert!((sys.sobolev_norm(&c, s) - 0.7).abs() < 1e-14);
        }
    }

    #[test]
    fn bernstein_edges() {
        // Ly = 4: mode (0, 6) has |k|/k0 = 1.5, the inner edge of block 1
        let g = make_grid(8, 16, 4.0).unwrap();
        let sys = ShellSystem::new(&g);
        let f = single(&g, 0, 6);
        let r = sys.bernstein_ratio(&f, 1, 1);
        assert!(!r.empty);
        assert!((r.ratio - 0.75).abs() < 1e-15);
        // mode (1, 4): |k|/k0 = sqrt 2, just under the outer edge 1.5 of block 0
        let h = single(&g, 1, 4);
        let r = sys.bernstein_ratio(&h, 0, 1);
        assert!((r.ratio - 2f64.sqrt()).abs() < 1e-15);
        assert!(sys.bernstein_ratio(&h, 2, 1).empty);
    }
}
