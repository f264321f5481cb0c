//! The four subcommands: `verify`, `logneg`, `distance`, `heatmap`.

pub mod distance;
pub mod heatmap;
pub mod logneg;
pub mod verify;

use std::path::Path;

use crate::CliResult;

pub(crate) fn ensure_out_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}

pub(crate) fn setting(key: &str, value: impl std::fmt::Display) -> (String, String) {
    (key.to_string(), value.to_string())
}
