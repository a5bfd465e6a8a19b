use crate::decomposition::tilde_part;
use crate::error::Result;
use crate::littlewood_paley::ShellSystem;
use crate::spectral::{SpectralField, VectorField};

/// Numerical probe of a trilinear block estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorProbe {
    /// `-int D_q(f . grad g) . D_q h`.
    pub lhs: f64,
    /// The transport term kept on the right-hand side of the estimate.
    pub remainder: f64,
    /// Norm products of the estimate with every constant set to 1.
    pub rhs_terms: Vec<(&'static str, f64)>,
    /// `|lhs - remainder| / sum(rhs_terms)`, 0 when both vanish.
    pub ratio: f64,
}

impl CommutatorProbe {
    pub fn rhs_total(&self) -> f64 {
        self.rhs_terms.iter().map(|(_, v)| v).sum()
    }
}

struct Norms<'a> {
    ls: &'a ShellSystem,
    s: f64,
}

impl Norms<'_> {
    fn l2(&self, v: &VectorField) -> f64 {
        v.l2_norm()
    }

    fn hs(&self, v: &VectorField) -> f64 {
        (self.ls.sobolev_norm(&v.x, self.s).powi(2) + self.ls.sobolev_norm(&v.y, self.s).powi(2)).sqrt()
    }

    fn grad(c: &SpectralField) -> f64 {
        (c.dx().l2_norm_sq() + c.dy().l2_norm_sq()).sqrt()
    }
}

fn d1(v: &VectorField) -> VectorField {
    v.map(|c| c.dx())
}

fn d2(v: &VectorField) -> VectorField {
    v.map(|c| c.dy())
}

fn block_pairing(ls: &ShellSystem, a: &VectorField, h: &VectorField, q: i32) -> Result<f64> {
    let mut sum = 0.0;
    for (x, y) in [(&a.x, &h.x), (&a.y, &h.y)] {
        sum += ls.block(x, q).inner(&ls.block(y, q))?;
    }
    Ok(sum)
}

fn finish(lhs: f64, remainder: f64, rhs_terms: Vec<(&'static str, f64)>) -> CommutatorProbe {
    let total: f64 = rhs_terms.iter().map(|(_, v)| v).sum();
    let diff = (lhs - remainder).abs();
    CommutatorProbe {
        lhs,
        remainder,
        rhs_terms,
        ratio: if diff == 0.0 { 0.0 } else { diff / total },
    }
}

/// Probe of the horizontally dissipative estimate for
/// `-int D_q(f . grad g) . D_q h`, whose transport remainder is
/// `-int S_q ftil2 d2 D_q g . D_q h`. Requires `div f = 0`; the ratio is a
/// reported quantity, not a bound.
pub fn commutator_probe(f: &VectorField, g: &VectorField, h: &VectorField, q: i32, s: f64) -> Result<CommutatorProbe> {
    let ls = ShellSystem::new(f.grid());
    let n = Norms { ls: &ls, s };
    let lhs = -block_pairing(&ls, &g.advected_by(f)?, h, q)?;

    let a = ls.low_pass(&tilde_part(&f.y), q);
    let dqg = g.map(|c| ls.block(c, q).dy());
    let transport = VectorField {
        x: a.multiply(&dqg.x)?,
        y: a.multiply(&dqg.y)?,
        div_free: false,
    };
    let dqh = h.map(|c| ls.block(c, q));
    let remainder = -transport.inner(&dqh)?;

    let w = 2f64.powf(-2.0 * q as f64 * s);
    let (f0, f1, f12) = (n.l2(f), n.l2(&d1(f)), n.l2(&d1(&d2(f))));
    let (g1, g12) = (n.l2(&d1(g)), n.l2(&d1(&d2(g))));
    let hs_sum = n.hs(f).powi(2) + n.hs(g).powi(2) + n.hs(h).powi(2);
    let d1hs_sum = n.hs(&d1(f)).powi(2) + n.hs(&d1(g)).powi(2) + n.hs(&d1(h)).powi(2);
    let lower = f1 * f12 + f0 * f0 * f1 * f1 + f0 * f0 * f12 * f12 + g1 * g12 + g12 * g12;
    let transport_coeff = (f0 * n.l2(&d2(f))).sqrt() + n.l2(&d2(g));
    Ok(finish(
        lhs,
        remainder,
        vec![
            ("low_order", w * lower * hs_sum),
            ("transport", w * transport_coeff * d1hs_sum),
            ("absorbed", w * d1hs_sum),
        ],
    ))
}

/// Probe of the tropical-climate variant, whose remainder is
/// `-int S_q f . grad D_q g . D_q h`.
pub fn tcm_commutator_probe(f: &VectorField, g: &VectorField, h: &VectorField, q: i32, s: f64) -> Result<CommutatorProbe> {
    let ls = ShellSystem::new(f.grid());
    let n = Norms { ls: &ls, s };
    let lhs = -block_pairing(&ls, &g.advected_by(f)?, h, q)?;

    let sqf = f.map(|c| ls.low_pass(c, q));
    let dqg = g.map(|c| ls.block(c, q));
    let dqh = h.map(|c| ls.block(c, q));
    let remainder = -dqg.advected_by(&sqf)?.inner(&dqh)?;

    let w = 2f64.powf(-2.0 * q as f64 * s);
    let (ghs, hhs, g1hs) = (n.hs(g), n.hs(h), n.hs(&d1(g)));
    let grad_f1 = Norms::grad(&f.x);
    let grad_f2 = Norms::grad(&f.y);
    let d2_grad_f2 = Norms::grad(&f.y.dy());
    Ok(finish(
        lhs,
        remainder,
        vec![
            ("f_grad_f1", w * (n.l2(f) + grad_f1) * (g1hs * hhs + ghs * hhs)),
            ("grad_f2", w * grad_f2 * ghs * hhs),
            ("interpolated", w * (grad_f2 * d2_grad_f2 * ghs * g1hs).sqrt() * hhs),
            ("d2g", w * n.l2(&d2(g)) * n.hs(&d1(f)) * hhs),
        ],
    ))
}
