use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

impl FileDigest {
    fn of(path: String, data: &[u8]) -> Self {
        let hash = Sha256::digest(data);
        let sha256 = hash.iter().map(|b| format!("{b:02x}")).collect();
        Self { path, sha256, bytes: data.len() as u64 }
    }
}

/// Error estimate attached to one stage of a run.
#[derive(Debug, Clone, Serialize)]
pub struct Stage {
    pub name: String,
    pub error_estimate: f64,
    pub detail: String,
}

/// The reproducible part of a manifest, embedded in every JSON result.
#[derive(Debug, Clone, Serialize)]
pub struct Run {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: Value,
    pub inputs: Vec<FileDigest>,
    pub stages: Vec<Stage>,
    pub manifest: &'static str,
}

#[derive(Debug, Serialize)]
struct Timestamp {
    unix_seconds: u64,
    elapsed_seconds: f64,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    #[serde(flatten)]
    run: &'a Run,
    outputs: &'a [FileDigest],
    timestamp: Timestamp,
}

/// One invocation: collects inputs, stages and outputs, then writes the
/// manifest.
pub struct Session {
    run: Run,
    out: PathBuf,
    outputs: Vec<FileDigest>,
    started: Instant,
}

impl Session {
    pub fn new(command: &'static str, config: &impl Serialize, out: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
        Ok(Self {
            run: Run {
                schema_version: SCHEMA_VERSION,
                tool: "emcavity",
                version: env!("CARGO_PKG_VERSION"),
                command,
                config: serde_json::to_value(config).expect("config serializes"),
                inputs: Vec::new(),
                stages: Vec::new(),
                manifest: MANIFEST_FILE,
            },
            out: out.to_path_buf(),
            outputs: Vec::new(),
            started: Instant::now(),
        })
    }

    pub fn read(&mut self, path: &Path) -> Result<Vec<u8>, CliError> {
        let data = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        self.run.inputs.push(FileDigest::of(path.display().to_string(), &data));
        Ok(data)
    }

    pub fn stage(&mut self, name: &str, error_estimate: f64, detail: impl Into<String>) {
        self.run.stages.push(Stage { name: name.into(), error_estimate, detail: detail.into() });
    }

    pub fn write(&mut self, name: &str, data: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.out.join(name);
        std::fs::write(&path, data).map_err(|e| CliError::io(&path, e))?;
        self.outputs.push(FileDigest::of(name.to_string(), data));
        Ok(path)
    }

    /// Writes `value` with the run block under the key `run`.
    pub fn write_json(&mut self, name: &str, value: &impl Serialize) -> Result<PathBuf, CliError> {
        let mut v = serde_json::to_value(value).expect("result serializes");
        match v.as_object_mut() {
            Some(map) => {
                map.insert("run".into(), serde_json::to_value(&self.run).expect("run serializes"));
            }
            None => v = serde_json::json!({ "run": self.run, "result": v }),
        }
        let mut text = serde_json::to_string_pretty(&v).expect("json");
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    pub fn finish(self) -> Result<(), CliError> {
        let unix_seconds = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let m = Manifest {
            run: &self.run,
            outputs: &self.outputs,
            timestamp: Timestamp { unix_seconds, elapsed_seconds: self.started.elapsed().as_secs_f64() },
        };
        let mut text = serde_json::to_string_pretty(&m).expect("json");
        text.push('\n');
        let path = self.out.join(MANIFEST_FILE);
        std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))
    }
}
