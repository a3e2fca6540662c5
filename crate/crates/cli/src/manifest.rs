//! Run manifests: every subcommand records its resolved config plus the
//! content hash of every input and output. `created_unix_ms` is the only
//! field allowed to differ between two runs of the same command on the
//! same inputs.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use cooc_core::hashing::sha256_file;
use cooc_core::{Error, Result};

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'static str,
    created_unix_ms: u128,
    config: &'a serde_json::Value,
    inputs: &'a BTreeMap<String, String>,
    outputs: &'a BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bin_scheme: Option<&'static str>,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    details: &'a serde_json::Value,
}

pub struct ManifestBuilder {
    command: &'static str,
    config: serde_json::Value,
    inputs: BTreeMap<String, String>,
    outputs: BTreeMap<String, String>,
    bin_scheme: Option<&'static str>,
    details: serde_json::Value,
}

impl ManifestBuilder {
    pub fn new(command: &'static str, config: &impl Serialize) -> Result<Self> {
        let config = serde_json::to_value(config)
            .map_err(|e| Error::internal("serializing resolved config").with_source(e))?;
        Ok(ManifestBuilder {
            command,
            config,
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            bin_scheme: None,
            details: serde_json::Value::Null,
        })
    }

    /// Records an input by content hash. Keys are the paths as given, so
    /// runs invoked with relative paths produce machine-independent
    /// manifests.
    pub fn input(&mut self, path: &Path) -> Result<()> {
        let hash = sha256_file(path)?;
        self.input_hashed(path, hash);
        Ok(())
    }

    pub fn input_hashed(&mut self, path: &Path, hash: String) {
        self.inputs.insert(path.display().to_string(), hash);
    }

    pub fn output(&mut self, path: &Path) -> Result<()> {
        let hash = sha256_file(path)?;
        self.outputs.insert(path.display().to_string(), hash);
        Ok(())
    }

    pub fn bin_scheme(&mut self, scheme: &'static str) {
        self.bin_scheme = Some(scheme);
    }

    pub fn details(&mut self, details: serde_json::Value) {
        self.details = details;
    }

    pub fn write(self, path: &Path) -> Result<()> {
        let created_unix_ms = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_millis())
            .unwrap_or(0);
        let manifest = RunManifest {
            command: self.command,
            created_unix_ms,
            config: &self.config,
            inputs: &self.inputs,
            outputs: &self.outputs,
            bin_scheme: self.bin_scheme,
            details: &self.details,
        };
        let mut rendered = serde_json::to_string_pretty(&manifest)
            .map_err(|e| Error::internal("serializing manifest").with_source(e))?;
        rendered.push('\n');
        std::fs::write(path, rendered).map_err(|e| cooc_core::error::io_data(path, e))
    }
}
