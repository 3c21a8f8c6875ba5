// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use photonic_mott::config::{Preset, RunConfig, SolverChoice};
use photonic_mott::observables::TimeSeries;
use photonic_mott::output::{Artifacts, TIMESERIES};
use photonic_mott::scenario::{self, prefix};
use photonic_mott::{Error, Result};

#[derive(Parser)]
#[command(name = "photonic-mott", version, about = "Photonic Mott insulator simulations in coupled EIT cavities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derived couplings, regime checks and U/Γ.
    Params(RunArgs),
    /// Exact single-cavity spectrum and two-photon shift against the closed forms.
    Validate(RunArgs),
    /// Constant-drive dynamics of the full and effective models.
    Mott(RunArgs),
    /// Dynamics under a linear drive ramp.
    Transition(RunArgs),
    /// Deviations between two column groups of time series CSV files.
    Compare(CompareArgs),
    /// U, Γ and regime checks over a parameter grid.
    Scan(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Starting point when no config file is given.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for trajectory ensembles (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// master, trajectory or both.
    #[arg(long)]
    solver: Option<String>,
    /// Trajectories per ensemble.
    #[arg(long)]
    traj: Option<usize>,
    /// Scan axis `name=lo:hi:n`; give at most twice.
    #[arg(long)]
    sweep: Vec<String>,
    /// Relative per-cavity g24 disorder for scans.
    #[arg(long)]
    disorder: Option<f64>,
    /// Disorder draws per scan point.
    #[arg(long)]
    draws: Option<usize>,
}

#[derive(Args)]
struct CompareArgs {
    /// Time series holding the full-model columns.
    input: PathBuf,
    /// Separate time series for the effective-model columns.
    #[arg(long)]
    effective: Option<PathBuf>,
    #[arg(long, default_value = prefix::FULL_ENSEMBLE)]
    full_prefix: String,
    #[arg(long, default_value = prefix::EFFECTIVE_MASTER)]
    effective_prefix: String,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn resolve(args: &RunArgs, default: Preset) -> Result<RunConfig> {
    let mut config = match (&args.config, &args.preset) {
        (Some(path), _) => RunConfig::from_path(path)?,
        (None, Some(name)) => name.parse::<Preset>()?.config(),
        (None, None) => default.config(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(solver) = &args.solver {
        config.solver = solver.parse::<SolverChoice>()?;
    }
    if let Some(n) = args.traj {
        config.n_traj = n;
    }
    if !args.sweep.is_empty() {
        config.sweep = args.sweep.clone();
    }
    if let Some(d) = args.disorder {
        config.disorder = d;
    }
    if let Some(n) = args.draws {
        config.draws = n;
    }
    config.validate()?;
    Ok(config)
}

fn with_threads<T>(threads: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T>
where
    T: Send,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n < 1 {
            return Err(Error::Config("--threads must be >= 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start thread pool: {e}")))?;
    pool.install(f)
}

fn read_series(path: &Path) -> Result<TimeSeries> {
    let path = if path.is_dir() { path.join(TIMESERIES) } else { path.to_path_buf() };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    TimeSeries::from_csv(&text)
}

fn finish(artifacts: &Artifacts, out: Option<&Path>, print_summary: bool) -> Result<()> {
    if print_summary {
        print!("{}", artifacts.summary_text());
    }
    if let Some(dir) = out {
        for path in artifacts.write(dir)? {
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Params(args) => {
            let config = resolve(&args, Preset::Mott)?;
            finish(&scenario::params(&config)?, args.out.as_deref(), true)
        }
        Command::Validate(args) => {
            let config = resolve(&args, Preset::Mott)?;
            finish(&scenario::validate(&config)?, args.out.as_deref(), true)
        }
        Command::Mott(args) => {
            let config = resolve(&args, Preset::Mott)?;
            let artifacts = with_threads(args.threads, || scenario::dynamics(&config, "mott"))?;
            finish(&artifacts, Some(args.out.as_deref().unwrap_or(Path::new("out"))), false)
        }
        Command::Transition(args) => {
            let config = resolve(&args, Preset::Transition)?;
            let artifacts = with_threads(args.threads, || scenario::dynamics(&config, "transition"))?;
            finish(&artifacts, Some(args.out.as_deref().unwrap_or(Path::new("out"))), false)
        }
        Command::Scan(args) => {
            let config = resolve(&args, Preset::Mott)?;
            finish(&scenario::scan(&config)?, Some(args.out.as_deref().unwrap_or(Path::new("out"))), false)
        }
        Command::Compare(args) => {
            let full = read_series(&args.input)?;
            let effective = match &args.effective {
                Some(path) => read_series(path)?,
                None => full.clone(),
            };
            let artifacts = scenario::compare(&full, &effective, &args.full_prefix, &args.effective_prefix)?;
            finish(&artifacts, Some(&args.out), true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 3 })
        }
    }
}
