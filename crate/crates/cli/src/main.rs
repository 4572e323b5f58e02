use std::path::PathBuf;
use std::process::ExitCode;

use aorsim_core::harness::{self, Overrides, RunOptions};
use aorsim_core::Error;
use clap::Parser;
use log::{error, info};

/// Monte Carlo angle-of-reception statistics behind a directional receive
/// antenna.
#[derive(Debug, Parser)]
#[command(name = "aorsim", version)]
struct Args {
    /// Simulation config (INI format).
    #[arg(long)]
    config: PathBuf,

    /// Override the base seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Override the Monte Carlo run count.
    #[arg(long)]
    runs: Option<usize>,

    /// Override the output directory.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads (0 = all cores).
    #[arg(long)]
    jobs: Option<usize>,

    /// Skip SVG figures.
    #[arg(long)]
    no_plots: bool,

    /// Only report errors.
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let level = if args.quiet { "error" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    let opts = RunOptions {
        overrides: Overrides {
            seed: args.seed,
            runs: args.runs,
            output_dir: args.out,
            jobs: args.jobs,
        },
        no_plots: args.no_plots,
    };
    match harness::run(&args.config, &opts) {
        Ok(a) => {
            info!("done: {} point(s), config hash {}", a.points.len(), a.config_hash);
            ExitCode::SUCCESS
        }
        Err(e @ Error::Config(_)) => {
            error!("{e}");
            ExitCode::from(1)
        }
        Err(e) => {
            error!("{e}");
            ExitCode::from(2)
        }
    }
}
