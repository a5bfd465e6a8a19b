//! Command-line front end for the solver: `run`, `verify`, `sweep` and `fit`.

pub mod config;
pub mod fit;
pub mod run;
pub mod sweep;
pub mod verify;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::{ConfigError, RunConfig};

/// Why a command failed; each variant maps to a process exit code.
#[derive(Debug)]
pub enum Failure {
    /// Invalid configuration (exit 1).
    Config(ConfigError),
    /// Bad command-line input or unreadable data (exit 1).
    Usage(String),
    /// File system trouble while writing outputs (exit 1).
    Io(String),
    /// The integration stopped on a CFL violation or non-finite state (exit 2).
    Numerical(String),
    /// At least one verification check failed (exit 3).
    Verification(Vec<String>),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) | Failure::Usage(_) | Failure::Io(_) => 1,
            Failure::Numerical(_) => 2,
            Failure::Verification(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(e) => write!(f, "{e}"),
            Failure::Usage(m) | Failure::Io(m) => write!(f, "{m}"),
            Failure::Numerical(m) => write!(f, "numerical abort: {m}"),
            Failure::Verification(names) => write!(f, "failed checks: {}", names.join(", ")),
        }
    }
}

impl std::error::Error for Failure {}

#[derive(Debug, Parser)]
#[command(name = "amhd", version, about = "Anisotropic MHD and tropical climate model experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one configuration and write diagnostics.csv, run.meta and snapshots.
    Run {
        config: PathBuf,
    },
    /// Run the built-in numerical self-checks.
    Verify {
        #[arg(long, value_enum, default_value = "fast")]
        level: verify::Level,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<verify::Fault>,
    },
    /// Run a configuration for every value of one numeric field.
    Sweep {
        config: PathBuf,
        /// Name of the numeric field to vary (for example `nu` or `delta`).
        #[arg(long)]
        axis: String,
        /// Comma-separated list of values.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
    },
    /// Fit an exponential decay rate to one column of a diagnostics CSV.
    Fit {
        csv: PathBuf,
        #[arg(long)]
        column: String,
        /// Time window as `t0:t1`.
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
}

/// Executes a parsed command, printing results on standard output.
pub fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run { config } => {
            let cfg = RunConfig::load(&config).map_err(Failure::Config)?;
            let summary = run::execute(&cfg)?;
            println!(
                "wrote {} records to {} in {:.2} s",
                summary.records.len(),
                summary.dir.display(),
                summary.wall_time
            );
            Ok(())
        }
        Command::Verify { level, inject_fault } => {
            let checks = verify::checks(level, inject_fault);
            print!("{}", verify::format_table(&checks));
            let failed: Vec<String> = checks.iter().filter(|c| !c.passed()).map(|c| c.name.to_string()).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Verification(failed))
            }
        }
        Command::Sweep { config, axis, values } => {
            let values = sweep::parse_values(&values)?;
            let cfg = RunConfig::load(&config).map_err(Failure::Config)?;
            let rows = sweep::execute(&cfg, &axis, &values, sweep::worker_limit()?)?;
            let mut failed = Vec::new();
            for r in &rows {
                match &r.outcome {
                    Ok(s) => println!(
                        "{axis} = {}: E = {:e}, E_tilde = {:e}, rate = {:.6}, F(T)/F(0) = {:.4}",
                        r.value, s.final_energy, s.final_energy_tilde, s.rate, s.f_ratio
                    ),
                    Err(e) => {
                        println!("{axis} = {}: failed: {e}", r.value);
                        failed.push(format!("{axis} = {}", r.value));
                    }
                }
            }
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Numerical(format!("{} of {} runs failed ({})", failed.len(), rows.len(), failed.join(", "))))
            }
        }
        Command::Fit { csv, column, window } => {
            let fit = fit::execute(&csv, &column, &window)?;
            println!("rate = {}", fit.rate);
            println!("residual = {:e}", fit.residual);
            println!("samples = {}", fit.samples);
            Ok(())
        }
    }
}
