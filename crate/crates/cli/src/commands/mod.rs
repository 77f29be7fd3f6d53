pub mod alexander;
pub mod cache;
pub mod corpus;
pub mod harris;
pub mod rank;
pub mod tower;

use crate::outcome::CliError;
use std::path::Path;

pub fn read_to_string(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

pub fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".into())
}

pub fn require_prime(p: u64) -> Result<(), CliError> {
    if !betti_core::exactla::is_prime_u64(p) {
        return Err(CliError::Input(format!("--prime {p} is not prime")));
    }
    Ok(())
}

pub fn require_levels(levels: u32) -> Result<(), CliError> {
    if levels == 0 {
        return Err(CliError::Input("levels must be at least 1".into()));
    }
    Ok(())
}
