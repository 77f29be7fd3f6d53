use crate::outcome::CliError;
use clap::{Args, Subcommand};
use std::path::PathBuf;

#[derive(Args)]
pub struct CacheArgs {
    #[command(subcommand)]
    pub action: CacheAction,
    /// Cache directory (default: $BETTI_CACHE or .betti-cache).
    #[arg(long, global = true)]
    pub dir: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum CacheAction {
    /// Print the cache location and its size.
    Info,
    /// Remove every cached row group.
    Clear,
}

pub fn run(args: CacheArgs) -> Result<(), CliError> {
    let dir = args.dir.unwrap_or_else(crate::default_cache_dir);
    let store = dir.join("v1");
    match args.action {
        CacheAction::Info => {
            let mut files = 0usize;
            let mut bytes = 0u64;
            if store.is_dir() {
                for entry in std::fs::read_dir(&store)? {
                    let entry = entry?;
                    if entry.path().extension().map(|e| e == "json").unwrap_or(false) {
                        files += 1;
                        bytes += entry.metadata()?.len();
                    }
                }
            }
            println!("cache dir: {}", dir.display());
            println!("entries: {files}");
            println!("bytes: {bytes}");
        }
        CacheAction::Clear => {
            if store.is_dir() {
                std::fs::remove_dir_all(&store)?;
            }
            println!("cleared {}", store.display());
        }
    }
    Ok(())
}
