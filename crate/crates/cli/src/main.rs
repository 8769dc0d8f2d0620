//! `synthseries` command-line tool.
//!
//! Exit codes: 0 success, 1 usage, 2 config, 3 IO, 4 numerical validation.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Overrides, RunConfig};
use error::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "synthseries", version, about = "Bootstrap ensembles and adequacy studies for hourly energy series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic ensemble from one series.
    Generate(Common),
    /// Alter a series by incremental selection or altered difference.
    Perturb(Common),
    /// Summary table and exceedance distributions of an ensemble.
    Analyze(Common),
    /// Renewable adequacy: fixed weights, weight sweep, ensemble pairs.
    Vre(Common),
}

#[derive(Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long, short)]
    config: PathBuf,
    /// Master seed; overrides `seed` in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of synthetic series; overrides `generate.replicates`.
    #[arg(long)]
    replicates: Option<usize>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory; overrides `out`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Chunk length in hours for exceedance statistics.
    #[arg(long)]
    chunk_length: Option<usize>,
}

fn run(cli: Cli) -> CliResult<()> {
    let (common, cmd): (&Common, fn(&RunConfig) -> CliResult<()>) = match &cli.command {
        Command::Generate(c) => (c, commands::generate),
        Command::Perturb(c) => (c, commands::perturb),
        Command::Analyze(c) => (c, commands::analyze),
        Command::Vre(c) => (c, commands::vre),
    };
    let mut cfg = RunConfig::load(&common.config)?;
    cfg.apply(&Overrides {
        seed: common.seed,
        threads: common.threads,
        out: common.out.clone(),
        replicates: common.replicates,
        chunk_length: common.chunk_length,
    });
    match cfg.threads()? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?
            .install(|| cmd(&cfg)),
        None => cmd(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("synthseries: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
