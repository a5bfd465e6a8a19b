mod common;

use std::f64::consts::PI;

use amhd_core::decomposition::{
    agmon_ratio, anisotropic_norm, anisotropic_norm_pq, bar_part, poincare_ratio, split, tilde_part, check_mean_flow,
    Exponent, AGMON_CONSTANT, POINCARE_CONSTANT,
};
use amhd_core::solver::Model;
use amhd_core::spectral::dealias;
use amhd_core::{make_grid, Grid, SpectralField};
use common::*;
use proptest::prelude::*;

#[test]
fn bar_part_matches_trapezoid_mean_in_x() {
    let g = make_grid(24, 16, 4.0).unwrap();
    let f = random_field(&g, 12);
    let v = f.to_physical();
    let s = split(&f);
    for j in 0..g.ny() {
        // trapezoid rule on a periodic grid is a plain average
        let mean = (0..g.nx()).map(|i| v[g.index(i, j)]).sum::<f64>() / g.nx() as f64;
        assert!((s.bar[j] - mean).abs() < 1e-14, "row {j}");
    }
    let back = s.reconstruct();
    assert!(max_coeff_diff(&back, &f) < 1e-15);
}

#[test]
fn anisotropic_norms_of_a_separable_field() {
    // f = cos(2 pi x) * (1 + sin(2 pi y / Ly)/2): every mixed norm is a product
    let g = make_grid(32, 32, 4.0).unwrap();
    let f = SpectralField::from_fn(&g, |x, y| (2.0 * PI * x).cos() * (1.0 + 0.5 * (PI * y / 2.0).sin()));
    let l2x = (0.5f64).sqrt();
    let prof_l2 = (4.0f64 * (1.0 + 0.125)).sqrt();
    let prof_inf = 1.5;
    assert!((anisotropic_norm(&f, Exponent::Two, Exponent::Two) - l2x * prof_l2).abs() < 1e-12);
    assert!((anisotropic_norm(&f, Exponent::Two, Exponent::Infinity) - l2x * prof_inf).abs() < 1e-12);
    assert!((anisotropic_norm(&f, Exponent::Infinity, Exponent::Two) - prof_l2).abs() < 1e-12);
    assert!((anisotropic_norm(&f, Exponent::Infinity, Exponent::Infinity) - prof_inf).abs() < 1e-12);
    assert!(anisotropic_norm_pq(&f, 3.0, 2.0).is_err());
}

#[test]
fn l2_l2_norm_agrees_with_parseval() {
    let g = make_grid(16, 20, 3.0).unwrap();
    for seed in 0..5 {
        let f = random_field(&g, seed);
        let quad = anisotropic_norm_pq(&f, 2.0, 2.0).unwrap();
        assert!((quad - f.l2_norm()).abs() <= 1e-12 * f.l2_norm());
    }
}

#[test]
fn poincare_is_sharp_on_the_first_mode() {
    let g = make_grid(32, 32, 4.0).unwrap();
    let f = SpectralField::from_fn(&g, |x, y| (2.0 * PI * x + 0.3).sin() * (PI * y / 2.0).cos() + 2.0);
    assert!((poincare_ratio(&f) - POINCARE_CONSTANT).abs() < 1e-12);
}

#[test]
fn poincare_and_agmon_hold_for_random_fields() {
    let g = make_grid(32, 32, 4.0).unwrap();
    for seed in 0..100 {
        let f = dealias(&random_field(&g, seed));
        assert!(poincare_ratio(&f) <= POINCARE_CONSTANT * (1.0 + 1e-12));
        let a = agmon_ratio(&f).unwrap();
        assert!(a <= AGMON_CONSTANT + 1e-6, "seed {seed}: {a}");
    }
}

#[test]
fn agmon_rejects_profiles() {
    let g = make_grid(16, 16, 4.0).unwrap();
    let f = SpectralField::from_fn(&g, |_, y| y.sin());
    assert!(agmon_ratio(&f).is_err());
    assert_eq!(poincare_ratio(&f), 0.0);
}

#[test]
fn divergence_free_velocity_has_no_mean_vertical_flow() {
    for ly in [1.0, 4.0] {
        let g = make_grid(32, 32, ly).unwrap();
        for seed in 0..10 {
            let s = random_state(&g, Model::Mhd, 0.1, seed);
            let r = check_mean_flow(&s.u);
            assert!(r.passed(), "{r:?}");
        }
    }
}

#[test]
fn mean_flow_check_flags_a_vertical_shear() {
    let g = make_grid(16, 16, 4.0).unwrap();
    let s = random_state(&g, Model::Mhd, 0.1, 3);
    let mut u = s.u.clone();
    u.y = &u.y + &SpectralField::from_fn(&g, |_, y| (PI * y / 2.0).sin());
    assert!(!check_mean_flow(&u).passed());
}

fn grid_strategy() -> impl Strategy<Value = Grid> {
    (2usize..=8, 2usize..=8, 0.5f64..6.0).prop_map(|(a, b, ly)| make_grid(2 * a, 2 * b, ly).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn split_is_linear_and_orthogonal(g in grid_strategy(), s1 in any::<u64>(), s2 in any::<u64>(), a in -2.0f64..2.0) {
        let (f, h) = (random_field(&g, s1), random_field(&g, s2));
        let combo = &f.scale(a) + &h;
        let lhs = bar_part(&combo);
        let rhs = &bar_part(&f).scale(a) + &bar_part(&h);
        prop_assert!(max_coeff_diff(&lhs, &rhs) <= 1e-14);
        let tf = tilde_part(&f);
        prop_assert!(bar_part(&tf).max_modal() == 0.0);
        prop_assert!(bar_part(&f).inner(&tf).unwrap().abs() <= 1e-13);
        let sum = &bar_part(&f) + &tf;
        prop_assert!(max_coeff_diff(&sum, &f) <= 1e-15);
    }

    #[test]
    fn poincare_bound_holds(g in grid_strategy(), seed in any::<u64>()) {
        // the Nyquist column has no resolved x-derivative
        let f = dealias(&random_field(&g, seed));
        prop_assert!(poincare_ratio(&f) <= POINCARE_CONSTANT * (1.0 + 1e-12));
    }
}
