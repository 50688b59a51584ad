//! `eulerlab` command-line driver: reproducible experiment pipelines with
//! persisted artifacts.

pub mod commands;
pub mod error;
pub mod manifest;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{
    cmd_boxcheck, cmd_evolve, cmd_flowcheck, cmd_norms, cmd_stability, cmd_theorem1, load_config,
    Outcome, RunOptions,
};
pub use error::{CliError, Status};
pub use manifest::RunManifest;

#[derive(Debug, Parser)]
#[command(name = "eulerlab", version, about = "Continuity experiments for 2D Euler in vorticity form")]
pub struct Cli {
    /// Experiment config (TOML); defaults apply when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Overrides `data.seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for experiment families.
    #[arg(long, global = true, env = "EULERLAB_WORKERS")]
    pub workers: Option<usize>,
    /// Replace the solver by the identity map (stability only).
    #[arg(long, global = true)]
    pub freeze: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve one datum; write ledger, checkpoints and history.
    Evolve,
    /// Paired runs over the δ ladder with the stability chain and rate fit.
    Stability,
    /// Convergence under mollification or truncation of the datum.
    Theorem1,
    /// Lagrangian representation check on an `evolve` output directory.
    Flowcheck {
        /// Output directory of a previous `evolve`.
        dir: PathBuf,
        /// Time of the frame to check.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Relative error bound; overrides the run's config.
        #[arg(long)]
        bound: Option<f64>,
    },
    /// Same run in boxes of side L and 2L.
    Boxcheck,
    /// Norm table of a field file.
    Norms {
        file: PathBuf,
        /// Box side for CSV input.
        #[arg(long, default_value_t = std::f64::consts::TAU)]
        box_length: f64,
        /// Sobolev order of the `hbeta` column.
        #[arg(long, default_value_t = 0.25)]
        beta: f64,
        /// Hölder exponent; omitted skips the seminorm.
        #[arg(long)]
        alpha: Option<f64>,
    },
}

pub const DEFAULT_OUT: &str = "eulerlab-out";

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let opts = RunOptions {
        config: cli.config.clone(),
        out: cli.out.clone().unwrap_or_else(|| DEFAULT_OUT.into()),
        seed: cli.seed,
        freeze: cli.freeze,
    };
    match &cli.command {
        Command::Evolve => cmd_evolve(&opts),
        Command::Stability => cmd_stability(&opts),
        Command::Theorem1 => cmd_theorem1(&opts),
        Command::Boxcheck => cmd_boxcheck(&opts),
        Command::Flowcheck { dir, t, bound } => cmd_flowcheck(dir, *t, *bound, cli.out.as_deref()),
        Command::Norms {
            file,
            box_length,
            beta,
            alpha,
        } => cmd_norms(file, *box_length, *beta, *alpha, cli.out.as_deref()),
    }
}

/// Runs the command on a pool of `--workers` threads, prints the summary (or
/// the error JSON on stderr) and returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let pool = match cli.workers {
        Some(0) => Err(CliError::invalid("--workers must be at least 1")),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| CliError::invalid(e.to_string())),
        None => rayon::ThreadPoolBuilder::new()
            .build()
            .map_err(|e| CliError::invalid(e.to_string())),
    };
    let result = pool.and_then(|p| p.install(|| dispatch(cli)));
    match result {
        Ok(outcome) => {
            println!("{}", serde_json::to_string_pretty(&outcome.summary).unwrap_or_default());
            outcome.status.code()
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.status.code()
        }
    }
}
