//! Command-line front end.
//!
//! Every command is a deterministic function of its config file and seed.
//! The `render_*` functions produce the exact bytes a command writes, so
//! tests can compare outputs without going through files.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::closure::{self, DEFAULT_CURVE_SAMPLES};
use crate::config::{Config, DEFAULT_HORIZON};
use crate::error::{Error, Result};
use crate::export::{
    write_closure_csv, write_json, write_metrics_json, write_regions_csv, write_trajectory_csv,
};
use crate::regions::{inner_boundary, outer_boundary, RegionSpec};
use crate::sim::{run, SimConfig, SimMode};
use crate::stability::StabilityCriteria;
use crate::sweep::{run_sweep, write_sweep_csv, RateGridSpec, SweepSpec};
use crate::validation::{run_all, ValidationOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ehrelay",
    version,
    about = "Stability regions and simulation of an energy-harvesting relay network"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct IoArgs {
    /// JSON parameter file.
    #[arg(long)]
    pub config: PathBuf,
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inner and outer bound polylines at the configured policy, as CSV.
    Regions(IoArgs),
    /// Closure boundary over all policies, as CSV.
    Closure {
        #[command(flatten)]
        io: IoArgs,
        /// Interior samples on the curved segment.
        #[arg(long, default_value_t = DEFAULT_CURVE_SAMPLES)]
        samples: usize,
    },
    /// Region membership and simulated verdicts over a rate grid, as CSV.
    Sweep {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        horizon: Option<u64>,
        /// `min:max:step` for both axes, or `s_min:s_max:s_step,r_min:r_max:r_step`.
        #[arg(long)]
        grid: Option<String>,
    },
    /// One simulation run: metrics as JSON, optionally the queue trajectory as CSV.
    Simulate {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        horizon: Option<u64>,
        #[arg(long)]
        mode: Option<SimMode>,
        /// Trajectory CSV path.
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },
    /// Runs the acceptance checks and writes a JSON report.
    Validate {
        /// Parameter set that replaces the default first simulation set.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        horizon: Option<u64>,
    },
}

/// CSV with both polylines, plus warnings for empty ones.
pub fn render_regions(cfg: &Config) -> Result<(Vec<u8>, Vec<String>)> {
    let spec = RegionSpec::new(cfg.ch, cfg.en, cfg.pol);
    let (inner, outer) = (inner_boundary(&spec), outer_boundary(&spec));
    let mut warnings = Vec::new();
    for (name, poly) in [("inner", &inner), ("outer", &outer)] {
        if poly.is_empty() {
            warnings.push(format!(
                "{name} bound is empty at q_s={}, q_r={}",
                cfg.pol.q_s, cfg.pol.q_r
            ));
        }
    }
    let mut buf = Vec::new();
    write_regions_csv(&mut buf, &[("inner", &inner), ("outer", &outer)])?;
    Ok((buf, warnings))
}

pub fn render_closure(cfg: &Config) -> Result<Vec<u8>> {
    render_closure_with(cfg, DEFAULT_CURVE_SAMPLES)
}

pub fn render_closure_with(cfg: &Config, samples: usize) -> Result<Vec<u8>> {
    let b = closure::boundary(&cfg.ch, &cfg.en);
    let mut buf = Vec::new();
    write_closure_csv(&mut buf, &b, samples)?;
    Ok(buf)
}

pub fn render_sweep(spec: &SweepSpec) -> Result<Vec<u8>> {
    let rows = run_sweep(spec)?;
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, &rows)?;
    Ok(buf)
}

/// Metrics JSON and trajectory CSV of one run.
pub fn render_simulate(cfg: &SimConfig) -> Result<(Vec<u8>, Vec<u8>)> {
    let m = run(cfg)?;
    let (mut json, mut csv) = (Vec::new(), Vec::new());
    write_metrics_json(&mut json, &m)?;
    write_trajectory_csv(&mut csv, &m.trajectory)?;
    Ok((json, csv))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

/// Runs a parsed command; returns the process exit code.
pub fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Regions(io) => {
            let cfg = Config::load(&io.config)?;
            let (bytes, warnings) = render_regions(&cfg)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            emit(io.out.as_deref(), &bytes)?;
        }
        Command::Closure { io, samples } => {
            let cfg = Config::load(&io.config)?;
            emit(io.out.as_deref(), &render_closure_with(&cfg, samples)?)?;
        }
        Command::Sweep {
            io,
            seed,
            horizon,
            grid,
        } => {
            let cfg = Config::load(&io.config)?;
            let grid = grid.or(cfg.grid.clone()).ok_or_else(|| {
                Error::field("grid", "missing: pass --grid or set \"grid\" in the config")
            })?;
            let spec = SweepSpec {
                ch: cfg.ch,
                en: cfg.en,
                pol: cfg.pol,
                grid: grid.parse::<RateGridSpec>()?,
                horizon: horizon.or(cfg.horizon).unwrap_or(DEFAULT_HORIZON),
                seeds: SweepSpec::seeds_from(seed),
                criteria: StabilityCriteria::default(),
            };
            emit(io.out.as_deref(), &render_sweep(&spec)?)?;
        }
        Command::Simulate {
            io,
            seed,
            horizon,
            mode,
            trajectory,
        } => {
            let mut cfg = Config::load(&io.config)?;
            cfg.seed = seed.or(cfg.seed);
            if let Some(h) = horizon {
                cfg.horizon = Some(h);
                // a config warmup sized for another horizon no longer applies
                if cfg.warmup.is_some_and(|w| w >= h) {
                    cfg.warmup = None;
                }
            }
            cfg.mode = mode.or(cfg.mode);
            let (json, csv) = render_simulate(&cfg.sim_config()?)?;
            emit(io.out.as_deref(), &json)?;
            if let Some(path) = trajectory {
                std::fs::write(path, csv)?;
            }
        }
        Command::Validate {
            config,
            out,
            seed,
            horizon,
        } => {
            let mut opts = ValidationOptions::new(seed);
            if let Some(h) = horizon {
                opts.horizon = h;
            }
            if let Some(path) = config {
                opts.base = Some(Config::load(path)?);
            }
            let report = run_all(&opts)?;
            for c in &report.checks {
                eprintln!("{}", c.line());
            }
            let mut buf = Vec::new();
            write_json(&mut buf, &report)?;
            emit(out.as_deref(), &buf)?;
            if !report.passed {
                return Ok(EXIT_VALIDATION_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args` (program name first) and runs the command.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
