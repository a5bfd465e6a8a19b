use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use amhd_core::diagnostics::{write_csv, DiagnosticsRecord};
use amhd_core::snapshot::save_snapshot;
use amhd_core::solver::{make_initial, run, RunOptions, RunOutput, DEFAULT_CFL};

use crate::config::RunConfig;
use crate::Failure;

/// Outcome of a completed run, as written to disk.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub dir: PathBuf,
    pub records: Vec<DiagnosticsRecord>,
    pub wall_time: f64,
}

fn io_fail(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn write_meta(cfg: &RunConfig, dir: &Path, wall_time: f64, status: &str) -> Result<(), Failure> {
    let text = format!(
        "{}\n[meta]\nversion = \"{}\"\nwall_time_s = {wall_time}\nstatus = \"{status}\"\n",
        cfg.to_toml(),
        env!("CARGO_PKG_VERSION"),
    );
    let path = dir.join("run.meta");
    fs::write(&path, text).map_err(|e| io_fail(&path, e))
}

fn write_diagnostics(cfg: &RunConfig, dir: &Path, records: &[DiagnosticsRecord]) -> Result<(), Failure> {
    let path = dir.join("diagnostics.csv");
    let file = fs::File::create(&path).map_err(|e| io_fail(&path, e))?;
    write_csv(std::io::BufWriter::new(file), records, &cfg.sobolev).map_err(|e| io_fail(&path, e))
}

fn write_snapshots(dir: &Path, out: &RunOutput) -> Result<(), Failure> {
    if out.snapshots.is_empty() {
        return Ok(());
    }
    let snap_dir = dir.join("snapshots");
    fs::create_dir_all(&snap_dir).map_err(|e| io_fail(&snap_dir, e))?;
    for (i, s) in out.snapshots.iter().enumerate() {
        let path = snap_dir.join(format!("snap_{i:05}.amhd"));
        save_snapshot(&path, s).map_err(|e| io_fail(&path, e))?;
    }
    Ok(())
}

/// Validates `cfg`, integrates it and writes the output directory.
pub fn execute(cfg: &RunConfig) -> Result<RunSummary, Failure> {
    let resolved = cfg.resolve().map_err(Failure::Config)?;
    let dir = cfg.output.clone();
    fs::create_dir_all(&dir).map_err(|e| io_fail(&dir, e))?;
    let start = Instant::now();
    let init = make_initial(&resolved.initial, &resolved.grid, resolved.params)
        .map_err(|e| Failure::Config(crate::config::ConfigError { field: "initial".into(), reason: e.to_string() }))?;
    let opts = RunOptions {
        cfl: DEFAULT_CFL,
        sobolev: cfg.sobolev.clone(),
        snapshot_every: cfg.snapshot_every,
    };
    match run(&init.state, cfg.t_end, cfg.dt, cfg.record_every, &opts) {
        Ok(out) => {
            write_diagnostics(cfg, &dir, &out.records)?;
            write_snapshots(&dir, &out)?;
            let wall_time = start.elapsed().as_secs_f64();
            write_meta(cfg, &dir, wall_time, "ok")?;
            Ok(RunSummary { dir, records: out.records, wall_time })
        }
        Err(failure) => {
            // keep what was computed before the abort
            write_diagnostics(cfg, &dir, &failure.records)?;
            write_meta(cfg, &dir, start.elapsed().as_secs_f64(), "aborted")?;
            Err(Failure::Numerical(failure.to_string()))
        }
    }
}
