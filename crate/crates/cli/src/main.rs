//! `betti` — towers of finite covers from the command line.
//!
//! Exit codes are a contract: 0 success, 1 verdict failure, 2 input error,
//! 3 budget error.

mod commands;
mod outcome;
mod reports;

use clap::{Args, Parser, Subcommand};
use outcome::EXIT_INPUT;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "betti", version, about = "Betti numbers of towers of finite covers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Seed for every randomized kernel (default fixed for reproducibility).
    #[arg(long, default_value_t = betti_core::DEFAULT_SEED)]
    seed: u64,
    /// Output directory for CSV/JSON artifacts.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args, Clone)]
struct CacheOpts {
    /// Cache directory (default: $BETTI_CACHE or .betti-cache).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Disable the level cache.
    #[arg(long)]
    no_cache: bool,
}

impl CacheOpts {
    fn resolve(&self) -> Option<PathBuf> {
        if self.no_cache {
            return None;
        }
        Some(self.cache_dir.clone().unwrap_or_else(default_cache_dir))
    }
}

fn default_cache_dir() -> PathBuf {
    std::env::var_os("BETTI_CACHE")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(".betti-cache"))
}

#[derive(Subcommand)]
enum Command {
    /// Run a tower of covers and emit the Betti table plus a report.
    Tower(commands::tower::TowerArgs),
    /// Residual check for a finitely presented Iwasawa module.
    Harris(commands::harris::HarrisArgs),
    /// Fox calculus: Alexander matrix, mod-p growth rate, diagonal data.
    Alexander(commands::alexander::AlexanderArgs),
    /// Exact rank (and optionally Smith normal form) of a matrix document.
    Rank(commands::rank::RankArgs),
    /// Run a manifest of named cases and compare against expected verdicts.
    Corpus(commands::corpus::CorpusArgs),
    /// Inspect or clear the level cache.
    Cache(commands::cache::CacheArgs),
}

fn main() -> ExitCode {
    // die quietly when a pager closes the pipe instead of panicking
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with code 0; usage errors exit 2
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Tower(args) => commands::tower::run(args),
        Command::Harris(args) => commands::harris::run(args),
        Command::Alexander(args) => commands::alexander::run(args),
        Command::Rank(args) => commands::rank::run(args),
        Command::Corpus(args) => commands::corpus::run(args),
        Command::Cache(args) => commands::cache::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
