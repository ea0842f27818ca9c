//! Configuration loading: preset or JSON file, then `--set` overrides.

use std::fs;
use std::path::Path;

use rydcryst_core::presets::{preset, PRESET_NAMES};
use rydcryst_core::RunConfig;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub fn load(preset_name: Option<&str>, input: Option<&Path>, overrides: &[String]) -> Result<RunConfig, CliError> {
    let base = match (preset_name, input) {
        (Some(name), None) => preset(name).ok_or_else(|| {
            CliError::Usage(format!("unknown preset `{name}` (expected one of {})", PRESET_NAMES.join(", ")))
        })?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        _ => return Err(CliError::Usage("exactly one of --preset or --input is required".into())),
    };
    apply_overrides(base, overrides)
}

fn apply_overrides(cfg: RunConfig, overrides: &[String]) -> Result<RunConfig, CliError> {
    if overrides.is_empty() {
        return Ok(cfg);
    }
    let mut tree = serde_json::to_value(&cfg).expect("config serializes");
    for item in overrides {
        let (key, raw) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("override `{item}` is not KEY=VALUE")))?;
        let value: Value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
        let mut node = &mut tree;
        for part in key.split('.') {
            node = node
                .as_object_mut()
                .and_then(|m| m.get_mut(part))
                .ok_or_else(|| CliError::Usage(format!("unknown configuration key `{key}`")))?;
        }
        *node = value;
    }
    serde_json::from_value(tree).map_err(|e| CliError::Usage(format!("invalid override: {e}")))
}

/// SHA-256 of the canonical JSON form of the configuration.
pub fn config_hash(cfg: &RunConfig) -> String {
    let text = serde_json::to_string(cfg).expect("config serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}
