use std::f64::consts::PI;

use amhd_core::decomposition::{agmon_ratio, poincare_ratio, check_mean_flow, AGMON_CONSTANT, POINCARE_CONSTANT};
use amhd_core::diagnostics::{energy_identity_residual, tcm_cancellation_residual, vanishing_identity_suite};
use amhd_core::littlewood_paley::ShellSystem;
use amhd_core::solver::{make_initial, nonlinear_rhs, run, InitialDataSpec, InitialKind, Model, ModelParams, RunOptions, SimState};
use amhd_core::spectral::{dealias, from_spectral, leray_project, to_spectral};
use amhd_core::{make_grid, Grid, SpectralField, VectorField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Level {
    Fast,
    Full,
}

/// Deliberate defects used to check that the suite notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Fault {
    /// Replace the projector by the identity.
    #[value(name = "leray_project")]
    LerayProject,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

struct Setup {
    n: usize,
    seeds: u64,
    run_n: usize,
    run_t: f64,
    fault: Option<Fault>,
}

fn noise(g: &Grid, rng: &mut ChaCha8Rng) -> SpectralField {
    let v: Vec<f64> = (0..g.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
    SpectralField::from_physical(g, &v).expect("grid-sized buffer")
}

fn state(g: &Grid, model: Model, nu: f64, amplitude: f64, delta: Option<f64>, seed: u64) -> SimState {
    let spec = InitialDataSpec {
        kind: InitialKind::RandomBand {
            band_x: ((g.nx() - 1) / 3).min(4),
            band_y: ((g.ny() - 1) / 3).min(8),
        },
        amplitude,
        delta_target: delta,
        seed,
    };
    let params = ModelParams::new(model, nu, nu).expect("valid coefficients");
    make_initial(&spec, g, params).expect("valid initial data").state
}

fn transform(s: &Setup, g: &Grid) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..s.seeds {
        let v: Vec<f64> = (0..g.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let back = from_spectral(&to_spectral(g, &v).expect("grid-sized buffer"));
        worst = v.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
    }
    Check { name: "transform_round_trip", residual: worst, tolerance: 1e-12 }
}

fn projector(s: &Setup, g: &Grid) -> Check {
    let project = |v: &VectorField| match s.fault {
        Some(Fault::LerayProject) => v.clone(),
        None => leray_project(v),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..s.seeds {
        let v = VectorField::new(noise(g, &mut rng), noise(g, &mut rng)).expect("same grid");
        let p = project(&v);
        let pp = project(&p);
        let scale = v.max_modal();
        let idem = pp.sub(&p).max_modal();
        worst = worst.max(idem.max(p.max_modal_divergence()) / scale);
    }
    Check { name: "leray_project", residual: worst, tolerance: 1e-12 }
}

fn energy_transfer(s: &Setup, g: &Grid) -> Check {
    let mut worst: f64 = 0.0;
    for model in [Model::Mhd, Model::Tcm] {
        for seed in 0..s.seeds {
            let st = state(g, model, 0.0, 1.0, None, seed);
            let (du, dw) = nonlinear_rhs(&st).expect("divergence-free state");
            let transfer = du.inner(&st.u).unwrap() + dw.inner(&st.w).unwrap();
            let scale = (du.l2_norm_sq() + dw.l2_norm_sq()).sqrt() * (st.u.l2_norm_sq() + st.w.l2_norm_sq()).sqrt();
            worst = worst.max(transfer.abs() / scale);
        }
    }
    Check { name: "nonlinear_energy_transfer", residual: worst, tolerance: 1e-12 }
}

fn identities(s: &Setup, g: &Grid) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for seed in 0..s.seeds {
        let a = state(g, Model::Mhd, 0.0, 1.0, None, 2 * seed);
        let b = state(g, Model::Mhd, 0.0, 1.0, None, 2 * seed + 1);
        let (q, k) = (rng.random_range(-1..=3), rng.random_range(-1..=4));
        let r = vanishing_identity_suite(&a.u, &a.w, &b.u, q, k).expect("same grid");
        let admissible = r.entries.iter().all(|e| e.admissible);
        worst = worst.max(if admissible { r.worst() } else { f64::INFINITY });
    }
    Check { name: "vanishing_identities", residual: worst, tolerance: 1e-10 }
}

fn cancellation(s: &Setup, g: &Grid) -> Check {
    let mut worst: f64 = 0.0;
    for seed in 0..s.seeds {
        let st = state(g, Model::Tcm, 0.0, 1.0, None, 500 + seed);
        worst = worst.max(tcm_cancellation_residual(&st.u, &st.w).expect("same grid").normalized);
    }
    Check { name: "tcm_cancellation", residual: worst, tolerance: 1e-10 }
}

fn poincare(s: &Setup, g: &Grid) -> Check {
    let first = SpectralField::from_fn(g, |x, y| (2.0 * PI * x).cos() * (1.0 + (2.0 * PI * y / g.ly()).sin()));
    let mut worst = (poincare_ratio(&first) - POINCARE_CONSTANT).abs();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..s.seeds {
        let f = dealias(&noise(g, &mut rng));
        worst = worst.max(poincare_ratio(&f) - POINCARE_CONSTANT);
    }
    Check { name: "poincare_x", residual: worst.max(0.0), tolerance: 1e-12 }
}

fn agmon(s: &Setup, g: &Grid) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..s.seeds {
        let f = dealias(&noise(g, &mut rng));
        worst = worst.max(agmon_ratio(&f).map_or(f64::INFINITY, |r| r - AGMON_CONSTANT));
    }
    Check { name: "agmon_x", residual: worst.max(0.0), tolerance: 1e-6 }
}

fn mean_vertical_flow(s: &Setup, g: &Grid) -> Check {
    let mut worst: f64 = 0.0;
    for seed in 0..s.seeds {
        let st = state(g, Model::Mhd, 0.0, 1.0, None, 700 + seed);
        worst = worst.max(check_mean_flow(&st.u).worst_relative());
    }
    Check { name: "mean_vertical_flow", residual: worst, tolerance: 1e-12 }
}

fn lp_reconstruction(s: &Setup, g: &Grid) -> Check {
    let ls = ShellSystem::new(g);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for _ in 0..s.seeds {
        let f = noise(g, &mut rng);
        let mut sum = SpectralField::zeros(g);
        for b in ls.blocks(&f) {
            sum += &b;
        }
        worst = worst.max((&sum - &f).max_modal());
    }
    Check { name: "lp_reconstruction", residual: worst, tolerance: 1e-12 }
}

fn bernstein(s: &Setup, g: &Grid) -> Check {
    let ls = ShellSystem::new(g);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..s.seeds {
        let f = dealias(&noise(g, &mut rng));
        for q in 0..=ls.q_max() {
            for k in [1u32, 2] {
                let r = ls.bernstein_ratio(&f, q, k);
                if r.empty {
                    continue;
                }
                let (lo, hi) = (0.75f64.powi(k as i32), 1.5f64.powi(k as i32));
                worst = worst.max(lo - r.ratio).max(r.ratio - hi);
            }
        }
    }
    Check { name: "bernstein", residual: worst.max(0.0), tolerance: 0.0 }
}

fn energy_runs(s: &Setup) -> [Check; 2] {
    let g = make_grid(s.run_n, s.run_n, 4.0).expect("valid grid");
    let viscous = state(&g, Model::Mhd, 0.1, 1.0, Some(1e-2), 1);
    let out = run(&viscous, s.run_t, 1e-3, 10, &RunOptions::default());
    let identity = out.map_or(f64::INFINITY, |o| energy_identity_residual(&o.records).value);
    let mut drift: f64 = 0.0;
    for model in [Model::Mhd, Model::Tcm] {
        let st = state(&g, model, 0.0, 1.0, Some(1e-2), 1);
        let out = run(&st, s.run_t, 1e-3, 10, &RunOptions::default());
        drift = drift.max(out.map_or(f64::INFINITY, |o| energy_identity_residual(&o.records).value));
    }
    [
        Check { name: "energy_identity", residual: identity, tolerance: 1e-6 },
        Check { name: "inviscid_conservation", residual: drift, tolerance: 1e-8 },
    ]
}

/// Runs every check at the given level.
pub fn checks(level: Level, fault: Option<Fault>) -> Vec<Check> {
    let s = match level {
        Level::Fast => Setup { n: 32, seeds: 5, run_n: 32, run_t: 0.1, fault },
        Level::Full => Setup { n: 64, seeds: 50, run_n: 64, run_t: 1.0, fault },
    };
    let g = make_grid(s.n, s.n, 4.0).expect("valid grid");
    let mut out = vec![
        transform(&s, &g),
        projector(&s, &g),
        energy_transfer(&s, &g),
        identities(&s, &g),
        cancellation(&s, &g),
        poincare(&s, &g),
        agmon(&s, &g),
        mean_vertical_flow(&s, &g),
        lp_reconstruction(&s, &g),
        bernstein(&s, &g),
    ];
    out.extend(energy_runs(&s));
    out
}

pub fn format_table(checks: &[Check]) -> String {
    let mut text = format!("{:<26} {:>12} {:>10}  result\n", "check", "residual", "tolerance");
    for c in checks {
        text.push_str(&format!(
            "{:<26} {:>12.3e} {:>10.1e}  {}\n",
            c.name,
            c.residual,
            c.tolerance,
            if c.passed() { "PASS" } else { "FAIL" }
        ));
    }
    text
}
