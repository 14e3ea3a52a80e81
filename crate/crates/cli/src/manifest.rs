use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

/// Written next to every CSV as `<csv>.manifest.json`.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub seed: Option<u64>,
    pub tool_version: &'static str,
    /// sha256 of each input, keyed by role.
    pub inputs: BTreeMap<String, String>,
    pub output: String,
    pub output_sha256: String,
    pub wall_time_secs: f64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn manifest_path(csv: &Path) -> PathBuf {
    let mut name = csv.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    csv.with_file_name(name)
}

/// Writes `csv` and its manifest.
pub fn write_csv_with_manifest(
    csv: &Path,
    body: &str,
    seed: Option<u64>,
    inputs: BTreeMap<String, String>,
    wall_time_secs: f64,
) -> Result<PathBuf, CliError> {
    fs::write(csv, body).map_err(|e| CliError::Usage(format!("{}: {e}", csv.display())))?;
    let manifest = RunManifest {
        command: std::env::args().collect(),
        seed,
        tool_version: env!("CARGO_PKG_VERSION"),
        inputs,
        output: csv.display().to_string(),
        output_sha256: sha256_hex(body.as_bytes()),
        wall_time_secs,
    };
    let path = manifest_path(csv);
    let text = serde_json::to_string_pretty(&manifest).map_err(grt_core::GrtError::from)?;
    fs::write(&path, text + "\n").map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(path)
}
