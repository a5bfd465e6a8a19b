use crate::decomposition::{bar_part, bar_vector, tilde_part, tilde_vector};
use crate::error::Result;
use crate::littlewood_paley::ShellSystem;
use crate::spectral::{SpectralField, VectorField};

/// Tolerance used to decide that an input field is divergence-free.
const ADMISSIBLE_DIV_TOL: f64 = 1e-10;

/// One exactly-vanishing integral `int A . B`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityResidual {
    pub name: &'static str,
    /// The raw integral.
    pub value: f64,
    /// Cauchy-Schwarz bound `||A|| ||B||`.
    pub scale: f64,
    /// `|value| / scale`, with `0 / 0 = 0`.
    pub normalized: f64,
    /// `false` if the inputs violate the identity's precondition; the
    /// residual is then informative only.
    pub admissible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub q: i32,
    pub k: i32,
    pub entries: Vec<IdentityResidual>,
}

impl IdentityReport {
    /// Largest normalized residual among admissible identities.
    pub fn worst(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.admissible)
            .map(|e| e.normalized)
            .fold(0.0, f64::max)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityResidual> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.entries.iter().all(|e| !e.admissible || e.normalized <= tol)
    }
}

fn ratio(value: f64, scale: f64) -> f64 {
    if value == 0.0 {
        0.0
    } else {
        value.abs() / scale
    }
}

fn norm(a: &[SpectralField]) -> f64 {
    a.iter().map(|x| x.l2_norm_sq()).sum::<f64>().sqrt()
}

/// `sign * sum_c int a_c b_c` with its Cauchy-Schwarz normalization.
fn pairing(name: &'static str, sign: f64, a: &[SpectralField], b: &[SpectralField], admissible: bool) -> Result<IdentityResidual> {
    pairing_scaled(name, sign, a, b, norm(a), admissible)
}

/// As [`pairing`], with `na >= ||a||` supplied by the caller. Used when `a`
/// is a block of a product `X`, so that `na = ||X||` bounds the round-off of
/// the product transform.
fn pairing_scaled(name: &'static str, sign: f64, a: &[SpectralField], b: &[SpectralField], na: f64, admissible: bool) -> Result<IdentityResidual> {
    let mut value = 0.0;
    for (x, y) in a.iter().zip(b) {
        value += x.inner(y)?;
    }
    let nb = norm(b);
    Ok(IdentityResidual {
        name,
        value: sign * value,
        scale: na * nb,
        normalized: ratio(value, na * nb),
        admissible,
    })
}

fn comps(v: &VectorField) -> [SpectralField; 2] {
    [v.x.clone(), v.y.clone()]
}

fn each(v: &[SpectralField; 2], f: impl Fn(&SpectralField) -> Result<SpectralField>) -> Result<[SpectralField; 2]> {
    Ok([f(&v[0])?, f(&v[1])?])
}

fn is_div_free(v: &VectorField) -> bool {
    v.max_modal_divergence() <= ADMISSIBLE_DIV_TOL * v.max_modal().max(f64::MIN_POSITIVE)
}

/// Evaluates the structurally vanishing integrals of the energy and
/// commutator estimates for the vector fields `f`, `g`, `h`, at block `q`
/// with inner block index `k`.
///
/// Names and integrands (sums over the components of `g` and `h`):
///
/// * `P13`: `int D_q(S_{k-1} fbar1 d1 D_k gtil) . D_q hbar`
/// * `P22`: `-int D_q(D_k fbar1 d1 S_{k-1} gtil) . D_q hbar`
/// * `P32`: `-sum_{|l-k|<=1} int D_q(D_k fbar1 d1 D_l gtil) . D_q hbar`
/// * `Q111`: `-int [D_q, S_{k-1} ftil2 d2] D_k gbar . D_q hbar`
/// * `Q121`: `-int (S_{k-1} ftil2 - S_q ftil2) d2 D_q D_k gbar . D_q hbar`
/// * `Q21`: `-int D_q(D_k ftil2 S_{k-1} d2 gbar) . D_q hbar`
/// * `Q31`: `-sum_{|l-k|<=1} int D_q(D_k ftil2 D_l d2 gbar) . D_q hbar`
/// * `A311`: `-int d2 fbar1 d1 gtil1 d2 gbar1`
/// * `M11`: `-int tilde(f . grad ftil) . ftil` (needs `div f = 0`)
/// * `M13`: `-int tilde(f . grad gtil) . gtil` (needs `div f = 0`)
/// * `M12+M14`: `int tilde(g . grad gtil) . ftil + int tilde(g . grad ftil) . gtil`
///   (needs `div g = 0`)
pub fn vanishing_identity_suite(f: &VectorField, g: &VectorField, h: &VectorField, q: i32, k: i32) -> Result<IdentityReport> {
    let ls = ShellSystem::new(f.grid());
    let fbar1 = bar_part(&f.x);
    let ftil2 = tilde_part(&f.y);
    let gbar = comps(&bar_vector(g));
    let gtil = comps(&tilde_vector(g));
    let dq_hbar = each(&comps(&bar_vector(h)), |c| Ok(ls.block(c, q)))?;
    let mut entries = Vec::new();

    // P13
    let a = ls.low_pass(&fbar1, k - 1);
    let x = each(&gtil, |c| a.multiply(&ls.block(c, k).dx()))?;
    entries.push(blocked("P13", 1.0, &ls, q, &x, &dq_hbar)?);

    // P22
    let a = ls.block(&fbar1, k);
    let x = each(&gtil, |c| a.multiply(&ls.low_pass(c, k - 1).dx()))?;
    entries.push(blocked("P22", -1.0, &ls, q, &x, &dq_hbar)?);

    // P32
    let x = each(&gtil, |c| a.multiply(&ls.widened_block(c, k).dx()))?;
    entries.push(blocked("P32", -1.0, &ls, q, &x, &dq_hbar)?);

    // Q111
    let a = ls.low_pass(&ftil2, k - 1);
    let outer = each(&gbar, |c| a.multiply(&ls.block(c, k).dy()))?;
    let inner = each(&gbar, |c| a.multiply(&ls.block(&ls.block(c, k), q).dy()))?;
    let prod = [
        &ls.block(&outer[0], q) - &inner[0],
        &ls.block(&outer[1], q) - &inner[1],
    ];
    entries.push(pairing_scaled("Q111", -1.0, &prod, &dq_hbar, norm(&outer) + norm(&inner), true)?);

    // Q121
    let a = &ls.low_pass(&ftil2, k - 1) - &ls.low_pass(&ftil2, q);
    let prod = each(&gbar, |c| a.multiply(&ls.block(&ls.block(c, k), q).dy()))?;
    entries.push(pairing("Q121", -1.0, &prod, &dq_hbar, true)?);

    // Q21
    let a = ls.block(&ftil2, k);
    let x = each(&gbar, |c| a.multiply(&ls.low_pass(&c.dy(), k - 1)))?;
    entries.push(blocked("Q21", -1.0, &ls, q, &x, &dq_hbar)?);

    // Q31
    let x = each(&gbar, |c| a.multiply(&ls.widened_block(&c.dy(), k)))?;
    entries.push(blocked("Q31", -1.0, &ls, q, &x, &dq_hbar)?);

    // A311
    let prod = [fbar1.dy().multiply(&gtil[0].dx())?];
    entries.push(pairing("A311", -1.0, &prod, &[gbar[0].dy()], true)?);

    let f_ok = is_div_free(f);
    let g_ok = is_div_free(g);
    let ftil = tilde_vector(f);
    let gtil_v = tilde_vector(g);
    let adv = |a: &VectorField, b: &VectorField| -> Result<[SpectralField; 2]> {
        let v = tilde_vector(&b.advected_by(a)?);
        Ok([v.x, v.y])
    };

    // M11, M13
    entries.push(pairing("M11", -1.0, &adv(f, &ftil)?, &comps(&ftil), f_ok)?);
    entries.push(pairing("M13", -1.0, &adv(f, &gtil_v)?, &comps(&gtil_v), f_ok)?);

    // M12 + M14
    let m12 = pairing("M12", 1.0, &adv(g, &gtil_v)?, &comps(&ftil), g_ok)?;
    let m14 = pairing("M14", 1.0, &adv(g, &ftil)?, &comps(&gtil_v), g_ok)?;
    entries.push(cancellation("M12+M14", &m12, &m14, g_ok));

    Ok(IdentityReport { q, k, entries })
}

/// `sign * int D_q x . b`, normalized by `||x|| ||b||`.
fn blocked(name: &'static str, sign: f64, ls: &ShellSystem, q: i32, x: &[SpectralField; 2], b: &[SpectralField]) -> Result<IdentityResidual> {
    let a = [ls.block(&x[0], q), ls.block(&x[1], q)];
    pairing_scaled(name, sign, &a, b, norm(x), true)
}

fn cancellation(name: &'static str, a: &IdentityResidual, b: &IdentityResidual, admissible: bool) -> IdentityResidual {
    let value = a.value + b.value;
    IdentityResidual {
        name,
        value,
        scale: a.scale + b.scale,
        normalized: ratio(value, a.scale + b.scale),
        admissible,
    }
}

/// `int v . grad d2 v . d2 u + int v . grad d2 u . d2 v`, which vanishes for
/// divergence-free `v`.
pub fn tcm_cancellation_residual(u: &VectorField, v: &VectorField) -> Result<IdentityResidual> {
    let d2u = u.map(|c| c.dy());
    let d2v = v.map(|c| c.dy());
    let i3 = pairing("I3", 1.0, &comps(&d2v.advected_by(v)?), &comps(&d2u), true)?;
    let j3 = pairing("J3", 1.0, &comps(&d2u.advected_by(v)?), &comps(&d2v), true)?;
    Ok(cancellation("I3+J3", &i3, &j3, is_div_free(v)))
}
