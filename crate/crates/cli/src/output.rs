//! Writes tables, summary and manifest into an output directory.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::run::RunOutput;

pub const TOOLKIT: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileRecord {
    pub file: String,
    pub sha256: String,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub toolkit: &'static str,
    pub version: &'static str,
    pub command: String,
    pub parameters: Value,
    pub files: Vec<FileRecord>,
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn pretty(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

/// Writes one CSV per table plus `summary.json` and `manifest.json`, returning
/// the manifest. Files are written one at a time.
pub fn write_output(dir: &Path, command: &str, out: &RunOutput) -> Result<Manifest> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut files = Vec::new();
    for table in &out.tables {
        let name = format!("{}.csv", table.name);
        let csv = table.to_csv();
        write(&dir.join(&name), csv.as_bytes())?;
        files.push(FileRecord {
            file: name,
            sha256: hex::encode(Sha256::digest(csv.as_bytes())),
            rows: table.rows.len(),
        });
    }
    write(&dir.join("summary.json"), pretty(&out.summary).as_bytes())?;
    let manifest = Manifest {
        toolkit: TOOLKIT,
        version: VERSION,
        command: command.to_string(),
        parameters: out.parameters.clone(),
        files,
    };
    write(&dir.join("manifest.json"), pretty(&manifest).as_bytes())?;
    Ok(manifest)
}

/// SHA-256 of a file on disk.
pub fn file_digest(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Directory for a figure tag below `root`.
pub fn figure_dir(root: &Path, tag: &str) -> PathBuf {
    root.join(tag)
}
