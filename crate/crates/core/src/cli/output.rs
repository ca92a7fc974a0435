//! Output directory bookkeeping and the run manifest.

use super::config::hex;
use crate::error::Result;
use crate::mc::Table;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

/// Provenance record written next to every set of outputs. Timestamps are the
/// only fields that differ between identical runs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub config_digest: String,
    pub master_seed: u64,
    pub artifact_version: String,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub outputs: Vec<String>,
}

pub fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0.0, |d| d.as_secs_f64())
}

/// Digest of an argument-derived configuration.
pub fn digest_of<T: Serialize>(value: &T) -> String {
    let canonical = serde_json::to_string(value).expect("config serializes");
    hex(&Sha256::digest(canonical.as_bytes()))
}

pub struct OutputDir {
    dir: PathBuf,
    prefix: String,
    json: bool,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(dir: &Path, prefix: &str, json: bool) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(OutputDir {
            dir: dir.to_path_buf(),
            prefix: prefix.to_string(),
            json,
            written: Vec::new(),
        })
    }

    fn write(&mut self, file: String, contents: &str) -> Result<()> {
        fs::write(self.dir.join(&file), contents)?;
        self.written.push(file);
        Ok(())
    }

    /// `<prefix>_<suffix>.csv`, mirrored as JSON under `--json`.
    pub fn table(&mut self, suffix: &str, table: &Table) -> Result<()> {
        self.write(format!("{}_{suffix}.csv", self.prefix), &table.to_csv())?;
        if self.json {
            let body = serde_json::to_string_pretty(&table.to_json()).expect("json");
            self.write(format!("{}_{suffix}.json", self.prefix), &(body + "\n"))?;
        }
        Ok(())
    }

    pub fn json(&mut self, suffix: &str, value: &Value) -> Result<()> {
        let body = serde_json::to_string_pretty(value).expect("json");
        self.write(format!("{}_{suffix}.json", self.prefix), &(body + "\n"))
    }

    pub fn finish(mut self, config_digest: String, master_seed: u64, started_unix: f64) -> Result<Vec<String>> {
        let manifest_file = format!("{}_manifest.json", self.prefix);
        let mut outputs = self.written.clone();
        outputs.push(manifest_file.clone());
        let m = RunManifest {
            command_line: std::env::args().collect(),
            config_digest,
            master_seed,
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix,
            finished_unix: unix_now(),
            outputs: outputs.clone(),
        };
        let body = serde_json::to_string_pretty(&m).expect("json");
        self.write(manifest_file, &(body + "\n"))?;
        Ok(outputs)
    }
}
