use crate::error::{Error, Result};

/// Minimum number of samples inside a fit window.
pub const MIN_FIT_SAMPLES: usize = 10;

/// Least-squares fit `log v = c - rate * t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub rate: f64,
    pub intercept: f64,
    /// Root-mean-square residual of `log v` about the fitted line.
    pub residual: f64,
    pub samples: usize,
    /// First and last sample time used.
    pub span: (f64, f64),
}

impl DecayFit {
    /// Residual relative to the total change of the fitted line over the
    /// window; 0 for a perfect fit, infinite for a flat line with scatter.
    pub fn relative_residual(&self) -> f64 {
        let drop = (self.rate * (self.span.1 - self.span.0)).abs();
        if self.residual == 0.0 {
            0.0
        } else {
            self.residual / drop
        }
    }
}

/// Fits an exponential decay to the samples of `series` with `t0 <= t <= t1`.
pub fn fit_decay_rate(series: &[(f64, f64)], window: (f64, f64)) -> Result<DecayFit> {
    let (t0, t1) = window;
    if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
        return Err(Error::DecayFit(format!("invalid window [{t0}, {t1}]")));
    }
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|(t, _)| *t >= t0 && *t <= t1)
        .copied()
        .collect();
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(Error::DecayFit(format!(
            "{} samples in [{t0}, {t1}], need at least {MIN_FIT_SAMPLES}",
            pts.len()
        )));
    }
    if let Some((t, v)) = pts.iter().find(|(_, v)| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::DecayFit(format!("value {v} at t = {t} is not positive")));
    }
    let n = pts.len() as f64;
    let tm = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let lm = pts.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let (mut stt, mut stl) = (0.0, 0.0);
    for (t, v) in &pts {
        stt += (t - tm) * (t - tm);
        stl += (t - tm) * (v.ln() - lm);
    }
    if stt == 0.0 {
        return Err(Error::DecayFit("all samples share one time".into()));
    }
    let slope = stl / stt;
    let intercept = lm - slope * tm;
    let ss: f64 = pts
        .iter()
        .map(|(t, v)| (v.ln() - intercept - slope * t).powi(2))
        .sum();
    Ok(DecayFit {
        rate: -slope,
        intercept,
        residual: (ss / n).sqrt(),
        samples: pts.len(),
        span: (pts[0].0, pts[pts.len() - 1].0),
    })
}
