//! Batch front door for the laboratory: parses run configurations,
//! orchestrates metric construction, data preparation, marches, sweeps,
//! verification, and reconstruction, and writes manifests, tables, and
//! meshes. Identical configuration and seed produce byte-identical
//! artifacts; nothing written here carries a timestamp.

mod artifacts;
mod config;
mod stages;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use config::RunConfig;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Lab(#[from] gclab::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
}

#[derive(Parser)]
#[command(
    name = "gclab",
    version,
    about = "Marches negatively curved metrics as a viscous flow, verifies the weak solution, and rebuilds the immersed surface"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// March one half-strip and write snapshots, reports, and a mesh
    Run(RunArgs),
    /// March both half-strips glued along the shared data line
    WholePlane(RunArgs),
    /// March a decreasing viscosity list in parallel and tabulate the
    /// cross-member diagnostics
    Sweep(RunArgs),
    /// Re-run verification from the snapshots of a prior run directory
    Verify(FromArgs),
    /// Rebuild the mesh from the snapshots of a prior run directory
    Reconstruct(FromArgs),
    /// List the metric families and their parameter schemas
    ListMetrics,
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration file (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the config `output` field and the
    /// GCLAB_OUT root
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config seed
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated viscosity list; replaces [sweep].eps, and a single
    /// value replaces solver.eps for run and whole-plane
    #[arg(long)]
    eps: Option<String>,
    /// Grid override formatted NsxNt, for example 256x64
    #[arg(long)]
    grid: Option<String>,
}

#[derive(Args)]
struct FromArgs {
    /// Prior run directory holding config.normalized.toml and snapshots/
    dir: PathBuf,
    /// Output directory; defaults to a subdirectory of the prior run
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => stages::run(&prepare(args, "run")?),
        Command::WholePlane(args) => stages::whole_plane(&prepare(args, "whole-plane")?),
        Command::Sweep(args) => stages::sweep(&prepare(args, "sweep")?),
        Command::Verify(args) => stages::verify_from(&args.dir, args.out.as_deref()),
        Command::Reconstruct(args) => stages::reconstruct_from(&args.dir, args.out.as_deref()),
        Command::ListMetrics => {
            print!("{}", stages::metric_catalog());
            Ok(())
        }
    }
}

/// A loaded configuration with every command-line override applied and the
/// output directory resolved.
pub struct Prepared {
    pub config: RunConfig,
    pub out: PathBuf,
}

fn prepare(args: RunArgs, command: &str) -> Result<Prepared, CliError> {
    let mut config = RunConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(grid) = &args.grid {
        let (n_s, n_t) = parse_grid(grid)?;
        config.solver.n_s = n_s;
        config.solver.n_t = n_t;
    }
    if let Some(eps) = &args.eps {
        let values = parse_eps(eps)?;
        if command == "sweep" {
            config.sweep = Some(config::SweepSection { eps: values });
        } else if values.len() == 1 {
            config.solver.eps = values[0];
        } else {
            return Err(CliError::Config(format!(
                "{command} takes a single --eps value, got {}",
                values.len()
            )));
        }
    }
    let out = resolve_out(&args, &config, command);
    Ok(Prepared { config, out })
}

fn parse_grid(grid: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Config(format!("--grid wants NsxNt, for example 256x64, got {grid:?}"));
    let (n_s, n_t) = grid.split_once('x').ok_or_else(bad)?;
    Ok((
        n_s.parse().map_err(|_| bad())?,
        n_t.parse().map_err(|_| bad())?,
    ))
}

fn parse_eps(list: &str) -> Result<Vec<f64>, CliError> {
    list.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("--eps entry {tok:?} is not a number")))
        })
        .collect()
}

/// Precedence: --out flag, then the config `output` field, then
/// <GCLAB_OUT or ./gclab-out>/<config stem>/<command>.
fn resolve_out(args: &RunArgs, config: &RunConfig, command: &str) -> PathBuf {
    if let Some(out) = &args.out {
        return out.clone();
    }
    if let Some(out) = &config.output {
        return PathBuf::from(out);
    }
    let root = std::env::var_os("GCLAB_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("gclab-out"));
    let stem = args
        .config
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".to_owned());
    root.join(stem).join(command)
}

fn read_to_string(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
