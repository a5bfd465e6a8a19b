use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use amhd_core::diagnostics::{f_functional, fit_decay_rate};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::run::{execute as run_one, RunSummary};
use crate::Failure;

/// Environment variable capping the number of concurrent sweep runs.
pub const WORKERS_VAR: &str = "AMHD_WORKERS";

/// One row of `sweep_summary.csv`.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    pub dir: PathBuf,
    pub outcome: Result<RowStats, String>,
}

#[derive(Debug, Clone, Copy)]
pub struct RowStats {
    pub final_energy: f64,
    pub final_energy_tilde: f64,
    /// Decay rate of `E_tilde` over the last 90% of the run, NaN if no fit.
    pub rate: f64,
    pub f_ratio: f64,
}

pub fn parse_values(text: &str) -> Result<Vec<f64>, Failure> {
    let values: Vec<f64> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Failure::Usage(format!("`{s}` is not a number"))))
        .collect::<Result<_, _>>()?;
    if values.is_empty() {
        return Err(Failure::Usage("the values list is empty".into()));
    }
    Ok(values)
}

/// Worker count from [`WORKERS_VAR`], defaulting to the available cores.
pub fn worker_limit() -> Result<usize, Failure> {
    match std::env::var(WORKERS_VAR) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Failure::Usage(format!("{WORKERS_VAR}={v} is not a positive integer"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn stats(summary: &RunSummary, t_end: f64) -> RowStats {
    let last = summary.records.last().expect("a completed run has records");
    let series: Vec<(f64, f64)> = summary.records.iter().map(|r| (r.t, r.energy_tilde)).collect();
    let rate = fit_decay_rate(&series, (0.1 * t_end, t_end)).map_or(f64::NAN, |f| f.rate);
    let f = f_functional(&summary.records);
    let f_ratio = f.last().unwrap().f / f[0].f;
    RowStats {
        final_energy: last.energy,
        final_energy_tilde: last.energy_tilde,
        rate,
        f_ratio,
    }
}

fn write_summary(path: &Path, axis: &str, rows: &[SweepRow]) -> Result<(), Failure> {
    let mut text = format!("{axis},status,E_final,E_tilde_final,rate,F_ratio,dir\n");
    for r in rows {
        match &r.outcome {
            Ok(s) => {
                let _ = writeln!(
                    text,
                    "{:e},ok,{:e},{:e},{:e},{:e},{}",
                    r.value,
                    s.final_energy,
                    s.final_energy_tilde,
                    s.rate,
                    s.f_ratio,
                    r.dir.display()
                );
            }
            Err(_) => {
                let _ = writeln!(text, "{:e},failed,NaN,NaN,NaN,NaN,{}", r.value, r.dir.display());
            }
        }
    }
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// Runs `template` once per value of `axis`, in parallel, and writes
/// `sweep_summary.csv` into the template's output directory.
pub fn execute(template: &RunConfig, axis: &str, values: &[f64], workers: usize) -> Result<Vec<SweepRow>, Failure> {
    if values.is_empty() {
        return Err(Failure::Usage("the values list is empty".into()));
    }
    let root = template.output.clone();
    let mut configs = Vec::with_capacity(values.len());
    for (i, &v) in values.iter().enumerate() {
        let mut cfg = template.clone();
        cfg.set_numeric(axis, v).map_err(Failure::Config)?;
        cfg.output = root.join(format!("{i:03}_{axis}_{v}"));
        cfg.resolve().map_err(Failure::Config)?;
        configs.push((v, cfg));
    }
    fs::create_dir_all(&root).map_err(|e| Failure::Io(format!("{}: {e}", root.display())))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Failure::Io(e.to_string()))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        configs
            .par_iter()
            .map(|(v, cfg)| SweepRow {
                value: *v,
                dir: cfg.output.clone(),
                outcome: run_one(cfg).map(|s| stats(&s, cfg.t_end)).map_err(|e| e.to_string()),
            })
            .collect()
    });
    write_summary(&root.join("sweep_summary.csv"), axis, &rows)?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_lists() {
        assert_eq!(parse_values("0.05, 0.1,0.2").unwrap(), vec![0.05, 0.1, 0.2]);
        assert_eq!(parse_values("1e-3,").unwrap(), vec![1e-3]);
        assert!(parse_values("").is_err());
        assert!(parse_values(" , ").is_err());
        assert!(parse_values("1,x").is_err());
    }
}
