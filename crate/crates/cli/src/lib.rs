//! Command-line layer over `triadyn-core`: one subcommand per pipeline
//! stage, each writing deterministic report files. Stages communicate only
//! through those files — every subcommand can re-run from the previous
//! stage's output — so the `pipeline` subcommand is nothing more than the
//! stages in order over a single in-memory dataset.

pub mod pipeline;
pub mod report;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use triadyn_core::Year;

/// Parse one `YEAR=PATH` occurrence of `--edges` or `--triads`.
pub fn parse_year_path(text: &str) -> Result<(Year, PathBuf), String> {
    let (year, path) = text
        .split_once('=')
        .ok_or_else(|| format!("expected YEAR=PATH, got {text:?}"))?;
    let year: Year = year
        .trim()
        .parse()
        .map_err(|_| format!("{year:?} is not a year label"))?;
    if path.is_empty() {
        return Err(format!("empty path in {text:?}"));
    }
    Ok((year, PathBuf::from(path)))
}

/// Write a report file atomically: the contents land under a temporary name
/// in the target directory and are renamed into place, so an interrupted run
/// never leaves a truncated report behind.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    let tmp = dir.join(format!("{name}.tmp"));
    fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, &path).with_context(|| format!("moving {} into place", tmp.display()))?;
    Ok(path)
}

/// [`write_atomic`] plus a progress line naming the finished file.
pub fn emit(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = write_atomic(dir, name, contents)?;
    println!("wrote {}", path.display());
    Ok(path)
}
