#![allow(dead_code)]

use amhd_core::solver::{make_initial, InitialDataSpec, InitialKind, Model, ModelParams, SimState};
use amhd_core::{Grid, SpectralField, VectorField};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// White-noise samples in [-1, 1].
pub fn random_samples(grid: &Grid, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..grid.len()).map(|_| rng.random_range(-1.0..1.0)).collect()
}

pub fn random_field(grid: &Grid, seed: u64) -> SpectralField {
    SpectralField::from_physical(grid, &random_samples(grid, seed)).unwrap()
}

/// Random real field with modes `|n_x| <= bx`, `|n_y| <= by` only.
pub fn random_band_field(grid: &Grid, bx: i64, by: i64, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralField::zeros(grid);
    for mx in 0..=bx {
        for my in -by..=by {
            if mx == 0 && my < 0 {
                continue;
            }
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            f.set_mode(mx, my, c).unwrap();
        }
    }
    f
}

pub fn random_vector(grid: &Grid, seed: u64) -> VectorField {
    VectorField::new(random_field(grid, seed), random_field(grid, seed ^ 0x9e37_79b9)).unwrap()
}

/// Dealiased random divergence-free state with both fields populated.
pub fn random_state(grid: &Grid, model: Model, nu: f64, seed: u64) -> SimState {
    let spec = InitialDataSpec {
        kind: InitialKind::RandomBand {
            band_x: ((grid.nx() - 1) / 3).min(4),
            band_y: ((grid.ny() - 1) / 3).min(8),
        },
        amplitude: 1.0,
        delta_target: None,
        seed,
    };
    make_initial(&spec, grid, ModelParams::new(model, nu, nu).unwrap()).unwrap().state
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn max_coeff_diff(a: &SpectralField, b: &SpectralField) -> f64 {
    a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
