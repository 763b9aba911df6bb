use std::path::{Path, PathBuf};

use serde::Serialize;
use symvec::Result;

/// What produced an output file, written as `<file>.manifest.json`.
#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub command: &'a str,
    pub parameters: serde_json::Value,
    pub seed: Option<u64>,
    pub budgets: serde_json::Value,
    pub outputs: Vec<String>,
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    output.with_file_name(name)
}

pub fn write_beside(output: &Path, manifest: &RunManifest<'_>) -> Result<()> {
    let text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    std::fs::write(manifest_path(output), text + "\n")?;
    Ok(())
}
