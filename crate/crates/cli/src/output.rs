//! Flat-file outputs: CSV tables with `#` metadata, and the JSON run manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use qrmt::EnsembleParams;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const TOOL_VERSION: &str = concat!("qrmt ", env!("CARGO_PKG_VERSION"));

/// Shortest round-trip decimal (exponent form for very large or small
/// magnitudes); infinities as `inf`/`-inf`.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn param_meta(p: &EnsembleParams) -> Vec<(String, String)> {
    vec![
        ("n".into(), p.n().to_string()),
        ("q".into(), fmt_num(p.q())),
        ("lambda".into(), fmt_num(p.lambda())),
        ("alpha".into(), fmt_num(p.alpha())),
        ("regime".into(), p.regime().name().into()),
    ]
}

/// A numeric table rendered as CSV: `# key: value` lines, one header line,
/// then the rows. Missing cells are written empty.
#[derive(Debug, Clone, Default)]
pub struct CsvTable {
    pub meta: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable { header: header.iter().map(|s| s.to_string()).collect(), ..Default::default() }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.into(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: impl IntoIterator<Item = f64>) {
        self.rows.push(row.into_iter().map(Some).collect());
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}: {v}");
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.map(fmt_num).unwrap_or_default()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct OutputEntry {
    /// Relative to the manifest's directory.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// Writes `contents` to `dir/name` and records its digest.
pub fn write_output(dir: &Path, name: &str, contents: &[u8]) -> CliResult<OutputEntry> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(OutputEntry { path: name.into(), sha256: sha256_hex(contents), bytes: contents.len() as u64 })
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum ManifestParams {
    One(EnsembleParams),
    Many(Vec<EnsembleParams>),
}

/// Provenance record written next to every data file. Field order is fixed.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    pub params: ManifestParams,
    pub master_seed: Option<u64>,
    pub sample_count: usize,
    pub started: String,
    pub finished: String,
    pub outputs: Vec<OutputEntry>,
}

pub fn timestamp() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

impl RunManifest {
    pub fn start(command: String, params: ManifestParams, master_seed: Option<u64>, sample_count: usize) -> Self {
        RunManifest {
            tool_version: TOOL_VERSION.into(),
            command,
            params,
            master_seed,
            sample_count,
            started: timestamp(),
            finished: String::new(),
            outputs: Vec::new(),
        }
    }

    pub fn finish(mut self, dir: &Path) -> CliResult<PathBuf> {
        self.finished = timestamp();
        let path = dir.join("manifest.json");
        let mut json = serde_json::to_string_pretty(&self).map_err(|e| CliError::Numeric(e.to_string()))?;
        json.push('\n');
        fs::write(&path, json).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }
}

/// Outcome of re-hashing one manifest entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigestCheck {
    pub path: String,
    pub ok: bool,
    pub detail: String,
}

/// Re-hashes every output listed in `manifest`. A missing or unreadable
/// manifest is an I/O error; missing data files are reported as failures.
pub fn check_manifest(manifest: &Path) -> CliResult<Vec<DigestCheck>> {
    let text = fs::read_to_string(manifest).map_err(|e| CliError::io(manifest, e))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::io(manifest, std::io::Error::new(std::io::ErrorKind::InvalidData, e)))?;
    let dir = manifest.parent().unwrap_or(Path::new("."));
    let outputs = value.get("outputs").and_then(|o| o.as_array()).ok_or_else(|| {
        CliError::io(manifest, std::io::Error::new(std::io::ErrorKind::InvalidData, "no `outputs` list"))
    })?;
    Ok(outputs
        .iter()
        .map(|o| {
            let path = o.get("path").and_then(|p| p.as_str()).unwrap_or("").to_string();
            let want = o.get("sha256").and_then(|p| p.as_str()).unwrap_or("");
            match fs::read(dir.join(&path)) {
                Ok(bytes) => {
                    let got = sha256_hex(&bytes);
                    let ok = got == want;
                    let detail = if ok { "digest matches".into() } else { format!("digest {got} != recorded {want}") };
                    DigestCheck { path, ok, detail }
                }
                Err(e) => DigestCheck { path, ok: false, detail: format!("unreadable: {e}") },
            }
        })
        .collect())
}
