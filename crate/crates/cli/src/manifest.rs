use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    pub file: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    pub config: Value,
    /// Every numerical knob in effect, including ones not set by the config.
    pub knobs: Map<String, Value>,
    pub outputs: Vec<OutputFile>,
    /// "ok" or "aborted".
    pub status: String,
    pub abort_reason: Option<String>,
    pub threads: usize,
    pub wall_time_seconds: f64,
}

/// Output files of one run, hashed as they are written.
pub struct Artifacts {
    dir: PathBuf,
    files: Vec<OutputFile>,
}

impl Artifacts {
    pub fn new(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        std::fs::write(self.dir.join(name), bytes)?;
        self.files.push(OutputFile {
            file: name.to_string(),
            bytes: bytes.len() as u64,
            sha256: hex::encode(Sha256::digest(bytes)),
        });
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut s = serde_json::to_vec_pretty(value)?;
        s.push(b'\n');
        self.write(name, &s)
    }

    pub fn csv<R: Serialize>(&mut self, name: &str, rows: &[R], footer: Option<&str>) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r)?;
        }
        let mut bytes = w.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
        if let Some(f) = footer {
            bytes.extend_from_slice(f.as_bytes());
            bytes.push(b'\n');
        }
        self.write(name, &bytes)
    }

    pub fn finish(self, mut manifest: Manifest) -> Result<Manifest, CliError> {
        manifest.outputs = self.files;
        let mut s = serde_json::to_vec_pretty(&manifest)?;
        s.push(b'\n');
        std::fs::write(self.dir.join("manifest.json"), s)?;
        Ok(manifest)
    }
}
