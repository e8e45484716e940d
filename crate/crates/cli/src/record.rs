//! Result records: every run emits one self-describing JSON document
//! carrying the manifest (command, full parameters, seed, version) and the
//! command's payload.  Identical invocations produce byte-identical records;
//! the wall-clock timestamp is only recorded when explicitly requested.

use serde::Serialize;
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentManifest {
    pub command: String,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub artifact_version: String,
    pub timestamp: Option<u64>,
}

impl ExperimentManifest {
    pub fn new(command: &str, params: serde_json::Value, seed: Option<u64>) -> Self {
        ExperimentManifest {
            command: command.to_string(),
            params,
            seed,
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ResultRecord {
    pub manifest: ExperimentManifest,
    pub schema_version: u32,
    pub payload: serde_json::Value,
}

impl ResultRecord {
    pub fn new(manifest: ExperimentManifest, payload: serde_json::Value) -> Self {
        ResultRecord { manifest, schema_version: SCHEMA_VERSION, payload }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("record serializes");
        text.push('\n');
        text
    }
}

/// Writes `text` to the file at `out`, or to stdout when `out` is `None`.
pub fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
