use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod cmd;
mod config;

#[derive(Parser)]
#[command(
    name = "datarank",
    version,
    about = "Rank datasets and publications in a citation network"
)]
struct Cli {
    /// Worker threads; 0 or unset uses every available core.
    #[arg(long, global = true, env = "DATARANK_THREADS")]
    threads: Option<usize>,
    /// TOML file with parameter and grid defaults; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// More log output on stderr (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph snapshot from node, edge, GenBank and Figshare inputs.
    Build(cmd::build::BuildArgs),
    /// Score every node with one algorithm and parameter set.
    Rank(cmd::rank::RankArgs),
    /// Correlate a parameter grid against observed usage.
    Grid(cmd::grid::GridArgs),
    /// Counts by kind plus age and in-degree distributions.
    Stats(cmd::stats::StatsArgs),
    /// Extract paper-to-accession citations from a full-text corpus.
    Extract(cmd::extract::ExtractArgs),
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let config = config::Config::load(cli.config.as_deref())?;
    if let Some(n) = cli.threads.filter(|&n| n > 0) {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.command {
        Command::Build(args) => cmd::build::run(args),
        Command::Rank(args) => cmd::rank::run(args, &config),
        Command::Grid(args) => cmd::grid::run(args, &config),
        Command::Stats(args) => cmd::stats::run(args),
        Command::Extract(args) => cmd::extract::run(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_env("DATARANK_LOG")
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
