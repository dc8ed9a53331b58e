//! Command-line front end: config loading, subcommands and output files.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod svg;

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::{CommandFn, Ctx};
use config::{RawConfig, RunConfig};
pub use error::{CliError, CliResult};
use output::{render_csv, Log};

#[derive(Debug, Parser)]
#[command(name = "z2sim", version, about = "Stroboscopic Z2 lattice gauge theory emulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Run configuration (`key = value` lines).
    #[arg(long, short, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, short, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Override the configured engine (auto, full, links, dual).
    #[arg(long, global = true)]
    pub engine: Option<String>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Also write an SVG chart.
    #[arg(long, global = true)]
    pub svg: bool,
    /// Override a config key, as `key=value`; repeatable.
    #[arg(long = "set", short = 's', global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Log to run.log only.
    #[arg(long, short, global = true)]
    pub quiet: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Exact ground-state Wilson loops and energies over the ratio sweep.
    ExactGs,
    /// Trotterized adiabatic ramps from either limit.
    Adiabatic,
    /// Stator-based Wilson-loop readout against direct expectation values.
    Wilson,
    /// Post-selected preparation of the magnetic ground state.
    PrepMagnetic,
    /// Gauge errors from residual couplings.
    NoiseScan,
    /// Resonance selection and frequency collisions of the sideband schedule.
    ScheduleCheck,
    /// Trotter versus gate-error budget against cooperativity.
    Budget,
    /// Trotter error against step count.
    TrotterScan,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::ExactGs => "exact-gs",
            Command::Adiabatic => "adiabatic",
            Command::Wilson => "wilson",
            Command::PrepMagnetic => "prep-magnetic",
            Command::NoiseScan => "noise-scan",
            Command::ScheduleCheck => "schedule-check",
            Command::Budget => "budget",
            Command::TrotterScan => "trotter-scan",
        }
    }

    fn handler(self) -> CommandFn {
        match self {
            Command::ExactGs => commands::exact_gs,
            Command::Adiabatic => commands::adiabatic,
            Command::Wilson => commands::wilson,
            Command::PrepMagnetic => commands::prep_magnetic,
            Command::NoiseScan => commands::noise_scan,
            Command::ScheduleCheck => commands::schedule_check,
            Command::Budget => commands::budget,
            Command::TrotterScan => commands::trotter_scan,
        }
    }
}

/// Loads the config with command-line overrides applied.
pub fn load_config(cli: &Cli) -> CliResult<RunConfig> {
    let mut raw = match &cli.config {
        Some(p) => RawConfig::load(p)?,
        None => RawConfig::default(),
    };
    if let Some(e) = &cli.engine {
        raw.set("engine", e)?;
    }
    for kv in &cli.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("--set expects key=value, got `{kv}`")))?;
        raw.set(k.trim(), v.trim())?;
    }
    RunConfig::from_raw(&raw)
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let cfg = load_config(cli)?;
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    fs::create_dir_all(&cli.out)?;
    let mut log = Log::open(&cli.out.join("run.log"), cli.quiet)?;
    let name = cli.command.name();
    log.line(format!("z2sim {} {name}, config sha256:{}", env!("CARGO_PKG_VERSION"), cfg.hash));
    let start = std::time::Instant::now();
    let out = {
        let mut ctx = Ctx { cfg: &cfg, log: &mut log };
        cli.command.handler()(&mut ctx)?
    };
    let csv = cli.out.join(format!("{name}.csv"));
    fs::write(&csv, render_csv(&cfg.hash, &out.rows))?;
    log.line(format!("wrote {} rows to {}", out.rows.len(), csv.display()));
    for (file, contents) in &out.extra {
        fs::write(cli.out.join(file), contents)?;
        log.line(format!("wrote {}", cli.out.join(file).display()));
    }
    if cli.svg {
        if let Some(plot) = &out.plot {
            let path = cli.out.join(format!("{name}.svg"));
            fs::write(&path, svg::render(plot))?;
            log.line(format!("wrote {}", path.display()));
        }
    }
    log.line(format!("done in {:.2} s", start.elapsed().as_secs_f64()));
    Ok(())
}
