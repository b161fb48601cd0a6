//! Deterministic data files: CSV tables with JSON sidecars and a run
//! manifest.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a rerun
//! with the same inputs reproduces every output byte for byte; each file's
//! FNV-1a hash is recorded in its sidecar and in the manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;
use crate::sphere::GridSpec;
use crate::wigner::PhaseSpaceField;

/// FNV-1a 64-bit hash, hex-encoded.
pub fn fnv1a64(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

/// One row of a CSV body.
pub fn csv_row(values: &[f64]) -> String {
    let mut parts = Vec::with_capacity(values.len());
    for v in values {
        parts.push(format_f64(*v));
    }
    parts.join(",")
}

/// Shortest round-trip float formatting (stable across runs and platforms).
pub fn format_f64(v: f64) -> String {
    if v == 0.0 {
        // avoid "-0"
        return "0".to_string();
    }
    format!("{v}")
}

/// Write a CSV file with a one-line header; returns its hash.
pub fn write_csv(path: &Path, header: &str, rows: &[Vec<f64>]) -> Result<String> {
    let mut body = String::with_capacity(rows.len() * 32 + header.len() + 1);
    body.push_str(header);
    body.push('\n');
    for row in rows {
        body.push_str(&csv_row(row));
        body.push('\n');
    }
    fs::write(path, body.as_bytes())?;
    Ok(fnv1a64(body.as_bytes()))
}

#[derive(Serialize)]
pub struct FieldSidecar<'a> {
    pub file: String,
    pub fnv1a64: String,
    pub two_j: i64,
    pub kind: String,
    pub normalization: String,
    pub grid: &'a GridSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
}

/// Write a phase-space field as `x,y,value` CSV plus a JSON sidecar.
/// Returns the CSV hash.
pub fn write_field(field: &PhaseSpaceField, csv_path: &Path) -> Result<String> {
    let rows: Vec<Vec<f64>> = field
        .coords
        .iter()
        .zip(&field.values)
        .map(|(&(x, y), &v)| vec![x, y, v])
        .collect();
    let header = match field.grid_spec {
        GridSpec::Sphere { .. } => "theta,phi,value",
        GridSpec::Stereographic { .. } => "x,y,value",
    };
    let hash = write_csv(csv_path, header, &rows)?;
    let sidecar = FieldSidecar {
        file: csv_path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
        fnv1a64: hash.clone(),
        two_j: field.twice_j,
        kind: format!("{:?}", field.kind).to_lowercase(),
        normalization: format!("{:?}", field.normalization).to_lowercase(),
        grid: &field.grid_spec,
        time: field.time,
    };
    let sidecar_path = csv_path.with_extension("json");
    fs::write(sidecar_path, serde_json::to_string_pretty(&sidecar)?)?;
    Ok(hash)
}

/// Manifest of one command invocation, printed to stdout.
#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    /// flag -> value, sorted
    pub inputs: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// path -> fnv1a64 hash of the file contents, sorted
    pub outputs: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: BTreeMap::new(),
            seed: None,
            outputs: BTreeMap::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) {
        self.inputs.insert(key.to_string(), value.to_string());
    }

    pub fn output(&mut self, path: &Path, hash: String) {
        self.outputs
            .insert(path.to_string_lossy().into_owned(), hash);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serialization")
    }
}

/// Ensure the output directory exists and return it as a path.
pub fn ensure_dir(dir: &str) -> Result<PathBuf> {
    let p = PathBuf::from(dir);
    fs::create_dir_all(&p)?;
    Ok(p)
}
