//! Artifact emission: provenance headers, CSV and JSON bodies, atomic writes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub core_version: &'static str,
    pub subcommand: &'static str,
    pub config_name: String,
    pub config_sha256: String,
    pub seed: u64,
    pub units: &'static str,
}

pub struct Writer {
    dir: PathBuf,
    prov: Provenance,
    /// Resolved configuration, echoed into every JSON file.
    config: Value,
    written: Vec<PathBuf>,
}

impl Writer {
    pub fn new(dir: &Path, prov: Provenance, config: Value) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        Ok(Writer {
            dir: dir.to_path_buf(),
            prov,
            config,
            written: Vec::new(),
        })
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    /// Writes `name` through a temporary file in the same directory and a
    /// rename, so readers never see a partial file.
    fn write_atomic(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let target = self.dir.join(name);
        let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", target.display()));
        let mut tmp = tempfile::Builder::new()
            .prefix(&format!(".{name}."))
            .tempfile_in(&self.dir)
            .map_err(io)?;
        tmp.write_all(bytes).map_err(io)?;
        tmp.as_file().sync_all().map_err(io)?;
        tmp.persist(&target).map_err(|e| io(e.error))?;
        self.written.push(target);
        Ok(())
    }

    /// CSV with `#` comment lines carrying provenance, the column schema and
    /// any `notes` (`key = value` annotations).
    pub fn csv(
        &mut self,
        name: &str,
        schema: &str,
        notes: &[(String, String)],
        header: &[&str],
        rows: &[Vec<String>],
    ) -> Result<(), CliError> {
        let p = &self.prov;
        let mut out = String::new();
        out.push_str(&format!("# {} {} (core {})\n", p.tool, p.version, p.core_version));
        out.push_str(&format!("# schema: {schema}\n"));
        out.push_str(&format!("# subcommand: {}\n", p.subcommand));
        out.push_str(&format!("# config: {} sha256 {}\n", p.config_name, p.config_sha256));
        out.push_str(&format!("# seed: {}\n", p.seed));
        out.push_str(&format!("# units: {}\n", p.units));
        for (k, v) in notes {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
        for r in rows {
            w.write_record(r).map_err(|e| CliError::Io(e.to_string()))?;
        }
        let body = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        let mut bytes = out.into_bytes();
        bytes.extend_from_slice(&body);
        self.write_atomic(name, &bytes)
    }

    /// JSON object holding `provenance` and `config` blocks next to `body`'s
    /// fields.
    pub fn json(&mut self, name: &str, schema: &str, body: Value) -> Result<(), CliError> {
        let mut obj = Map::new();
        let mut prov = serde_json::to_value(&self.prov).expect("provenance serializes");
        prov["schema"] = json!(schema);
        obj.insert("provenance".into(), prov);
        obj.insert("config".into(), self.config.clone());
        match body {
            Value::Object(m) => obj.extend(m),
            other => {
                obj.insert("data".into(), other);
            }
        }
        let mut text = serde_json::to_string_pretty(&Value::Object(obj)).expect("json serializes");
        text.push('\n');
        self.write_atomic(name, text.as_bytes())
    }
}

pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x}")
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}
