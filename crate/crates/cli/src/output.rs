//! Reproducibility headers and file writers.

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::error::Result;

pub const TOOL: &str = "hamnf";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Tool version, config hash, seeds and the full resolved config.
pub fn header(cfg: &ExperimentConfig, command: &str) -> Value {
    json!({
        "tool": TOOL,
        "version": VERSION,
        "command": command,
        "config_sha256": cfg.hash(),
        "seeds": { "potential": cfg.potential.seed, "experiment": cfg.experiment_seed() },
        "config": cfg.canonical_json(),
    })
}

/// Writes `body` after a `# {header}` comment line.
pub fn write_csv(path: &Path, header: &Value, body: &[u8]) -> Result<()> {
    let mut text = format!("# {header}\n").into_bytes();
    text.extend_from_slice(body);
    fs::write(path, text)?;
    Ok(())
}

/// Writes `{"header": ..., key: payload}` as pretty JSON.
pub fn write_json(path: &Path, header: &Value, key: &str, payload: &impl Serialize) -> Result<()> {
    let mut doc = serde_json::Map::new();
    doc.insert("header".into(), header.clone());
    doc.insert(key.into(), serde_json::to_value(payload).map_err(crate::error::runtime)?);
    fs::write(path, serde_json::to_string_pretty(&Value::Object(doc)).map_err(crate::error::runtime)? + "\n")?;
    Ok(())
}
