//! Output plumbing: run manifests, CSV writing, float formatting.

use serde::Serialize;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

/// Every run emits one of these next to its data file. Re-running a
/// deterministic subcommand with the recorded parameters reproduces the data
/// file byte for byte; only the timestamp here differs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub timestamp_utc: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub params: serde_json::Value,
}

impl RunManifest {
    pub fn new(subcommand: &'static str, seed: Option<u64>, params: serde_json::Value) -> Self {
        Self {
            schema_version: 1,
            tool: "doppler-beam",
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            timestamp_utc: chrono::Utc::now().to_rfc3339(),
            seed,
            params,
        }
    }

    pub fn write_beside(&self, output: &Path) -> std::io::Result<PathBuf> {
        let mut path = output.as_os_str().to_owned();
        path.push(".manifest.json");
        let path = PathBuf::from(path);
        fs::write(
            &path,
            serde_json::to_string_pretty(self).expect("manifest serializes"),
        )?;
        Ok(path)
    }
}

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<I>(path: &Path, header: &str, rows: I) -> std::io::Result<()>
where
    I: IntoIterator<Item = String>,
{
    let file = fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "{header}")?;
    for row in rows {
        writeln!(w, "{row}")?;
    }
    w.flush()
}
