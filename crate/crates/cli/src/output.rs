//! Deterministic result files: CSV and JSON with an embedded config hash,
//! '.' decimals, 17 significant digits, and no runtime metadata (that goes
//! to a separate sidecar, so identical runs produce identical bytes).

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

/// Hex SHA-256 of the effective configuration (including seed overrides):
/// every result file embeds it so a run can be matched to its config.
pub fn config_hash<T: Serialize>(effective_config: &T) -> String {
    // serde_json maps serialize with sorted keys, so the byte stream is a
    // canonical form of the config
    let bytes = serde_json::to_vec(effective_config).expect("config serializes");
    let digest = Sha256::digest(&bytes);
    let mut hex = String::with_capacity(64);
    for b in digest {
        hex.push_str(&format!("{b:02x}"));
    }
    hex
}

/// 17-significant-digit scientific notation, locale independent.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct CsvWriter {
    lines: Vec<String>,
}

impl CsvWriter {
    pub fn new(hash: &str, columns: &[&str]) -> Self {
        CsvWriter {
            lines: vec![format!("# config_hash={hash}"), columns.join(",")],
        }
    }

    /// Inserts a `# ...` comment line after the hash header (warnings and
    /// similar annotations).
    pub fn comment(&mut self, text: &str) {
        self.lines.insert(1, format!("# {text}"));
    }

    pub fn row(&mut self, values: &[f64]) {
        self.lines.push(
            values
                .iter()
                .map(|&v| fmt_float(v))
                .collect::<Vec<_>>()
                .join(","),
        );
    }

    pub fn row_mixed(&mut self, prefix: &str, values: &[f64]) {
        let mut cells = vec![prefix.to_string()];
        cells.extend(values.iter().map(|&v| fmt_float(v)));
        self.lines.push(cells.join(","));
    }

    pub fn write(self, path: &Path) -> Result<()> {
        write_atomic(path, (self.lines.join("\n") + "\n").as_bytes())
    }
}

/// JSON result file with the hash embedded as a top-level field.
pub fn write_json<T: Serialize>(path: &Path, hash: &str, payload: &T) -> Result<()> {
    let mut value = serde_json::to_value(payload).context("serializing result")?;
    if let serde_json::Value::Object(map) = &mut value {
        map.insert(
            "config_hash".to_string(),
            serde_json::Value::String(hash.to_string()),
        );
    } else {
        value = serde_json::json!({ "config_hash": hash, "result": value });
    }
    write_atomic(path, (serde_json::to_string_pretty(&value)? + "\n").as_bytes())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)
            .with_context(|| format!("creating output directory {}", parent.display()))?;
    }
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

/// Runtime metadata sidecar, kept out of the deterministic result files.
#[derive(Serialize)]
pub struct RunInfo {
    pub command: String,
    pub wall_ms: u128,
    pub jobs: usize,
    pub version: &'static str,
}

pub fn write_sidecar(out_dir: &Path, info: &RunInfo) -> Result<()> {
    let path = out_dir.join("meta").join("run_info.json");
    write_atomic(
        &path,
        (serde_json::to_string_pretty(info)? + "\n").as_bytes(),
    )
}

/// Scans a result directory for embedded config hashes and checks them
/// against the expected one. Returns the offending files.
pub fn verify_hashes(out_dir: &Path, expected: &str) -> Result<Vec<PathBuf>> {
    let mut bad = Vec::new();
    let mut stack = vec![out_dir.to_path_buf()];
    while let Some(dir) = stack.pop() {
        if dir.file_name().is_some_and(|n| n == "meta") {
            continue;
        }
        let entries = match fs::read_dir(&dir) {
            Ok(e) => e,
            Err(_) => continue,
        };
        let mut paths: Vec<PathBuf> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
        paths.sort();
        for path in paths {
            if path.is_dir() {
                stack.push(path);
                continue;
            }
            let Some(found) = embedded_hash(&path)? else {
                continue;
            };
            if found != expected {
                bad.push(path);
            }
        }
    }
    Ok(bad)
}

fn embedded_hash(path: &Path) -> Result<Option<String>> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let text = match ext {
        "csv" | "json" => fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?,
        _ => return Ok(None),
    };
    if ext == "csv" {
        if let Some(first) = text.lines().next() {
            if let Some(hash) = first.strip_prefix("# config_hash=") {
                return Ok(Some(hash.trim().to_string()));
            }
        }
        return Ok(None);
    }
    let value: serde_json::Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(_) => return Ok(None),
    };
    Ok(value
        .get("config_hash")
        .and_then(|h| h.as_str())
        .map(|s| s.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_has_17_significant_digits() {
        assert_eq!(fmt_float(0.25), "2.5000000000000000e-1");
        assert_eq!(fmt_float(1.0 / 3.0), "3.3333333333333331e-1");
    }

    #[test]
    fn hash_is_stable_across_key_order() {
        let a: serde_json::Value = serde_json::from_str(r#"{"x":1,"y":2}"#).unwrap();
        let b: serde_json::Value = serde_json::from_str(r#"{"y":2,"x":1}"#).unwrap();
        assert_eq!(config_hash(&a), config_hash(&b));
    }
}
