//! Command-line front end: runs the enumeration, homology and certificate
//! suites and emits machine-diffable reports.
//!
//! Exit codes: 0 when every verdict passes, 1 when any verdict fails, 2 on
//! configuration errors (unknown algebra, malformed input file, resource
//! cutoff).

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::OutputFormat;

#[derive(Parser)]
#[command(
    name = "cehom",
    version,
    about = "Exact Chevalley-Eilenberg homology workbench"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate Lyndon words and check counts against the Witt formula
    Lyndon(LyndonArgs),
    /// Weight-wise Betti table of a graded algebra
    Homology(HomologyArgs),
    /// Certificate suite for an admissible sequence and a subset family
    Certify(CertifyArgs),
    /// Inspect or clear the bracket-table cache
    Cache(CacheArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
    /// Worker threads (0 = one per core)
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Record measured timings in reports (output is no longer byte-stable)
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct LyndonArgs {
    /// Largest word length to enumerate
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    max_weight: u32,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct HomologyArgs {
    /// Algebra selector: free | quot-k | quot-j | nilpotent:Q
    #[arg(long, default_value = "free")]
    algebra: String,
    /// Largest weight; defaults to 10 for word-basis algebras, 30 for
    /// quot-k and 20 for quot-j
    #[arg(long)]
    max_weight: Option<usize>,
    /// Restrict to chains of this occurrence in b
    #[arg(long)]
    occurrence: Option<usize>,
    /// Also compute the table of this algebra and compare cell dimensions
    /// and differential ranks
    #[arg(long)]
    compare_with: Option<String>,
    /// Bracket-table cache directory (else $CEHOM_CACHE_DIR, else
    /// ~/.cache/cehom); "off" disables caching
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Largest admissible basis size of a single cell
    #[arg(long, default_value_t = 200_000)]
    max_cell_dim: usize,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CertifyArgs {
    /// JSON description of the sequence pair and subset family; defaults to
    /// the minimal length-4 sequence with subsets {2}, {3}, {4}
    #[arg(long)]
    input: Option<PathBuf>,
    /// Weight truncation for the symbolic d(alpha) = Omega and injectivity
    /// checks
    #[arg(long, default_value_t = 52, value_parser = clap::value_parser!(u32).range(3..))]
    max_weight: u32,
    /// Matrix truncation for the independence certificate (default: smallest
    /// T that covers every referenced index)
    #[arg(long)]
    truncate: Option<usize>,
    /// Seed for the randomized rank-bound families
    #[arg(long, default_value_t = 0xCE40)]
    seed: u64,
    /// Bracket-table cache directory (else $CEHOM_CACHE_DIR, else
    /// ~/.cache/cehom); "off" disables caching
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CacheArgs {
    #[command(subcommand)]
    action: CacheAction,
}

#[derive(Subcommand)]
enum CacheAction {
    /// List cache entries with their validity
    Inspect(CacheActionArgs),
    /// Remove all cache entries
    Clear(CacheActionArgs),
}

#[derive(Args)]
struct CacheActionArgs {
    /// Cache directory (else $CEHOM_CACHE_DIR, else ~/.cache/cehom)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

fn configure_jobs(jobs: usize) {
    if jobs > 0 {
        // ignore the error when a pool was already installed
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Lyndon(args) => {
            configure_jobs(args.common.jobs);
            commands::lyndon(args)
        }
        Command::Homology(args) => {
            configure_jobs(args.common.jobs);
            commands::homology(args)
        }
        Command::Certify(args) => {
            configure_jobs(args.common.jobs);
            commands::certify(args)
        }
        Command::Cache(args) => commands::cache(args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
