//! Deterministic output: CSV tables with a provenance comment header, and
//! JSON reports carrying the same metadata. Identical config and seed must
//! produce byte-identical files.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Floats are printed with 12 significant digits, scientific notation.
pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    format!("{:.11e}", v)
}

/// CSV buffer: `#`-prefixed provenance comments, a mandatory header row,
/// comma separator, LF line endings.
pub struct CsvTable {
    buf: String,
}

impl CsvTable {
    pub fn new(config_hash: &str, rng_seed: u64, extra: &[(&str, String)]) -> Self {
        let mut buf = String::new();
        buf.push_str(&format!("# orbitlab {}\n", TOOL_VERSION));
        buf.push_str(&format!("# config_hash: {}\n", config_hash));
        buf.push_str(&format!("# rng_seed: {}\n", rng_seed));
        for (k, v) in extra {
            buf.push_str(&format!("# {}: {}\n", k, v));
        }
        CsvTable { buf }
    }

    pub fn header(&mut self, cols: &[&str]) {
        self.buf.push_str(&cols.join(","));
        self.buf.push('\n');
    }

    pub fn row(&mut self, cells: &[String]) {
        self.buf.push_str(&cells.join(","));
        self.buf.push('\n');
    }

    pub fn comment(&mut self, text: &str) {
        self.buf.push_str(&format!("# {}\n", text));
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf.into_bytes()
    }
}

/// JSON report wrapper with the same provenance fields.
#[derive(Serialize)]
pub struct JsonReport<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_hash: String,
    pub rng_seed: u64,
    #[serde(flatten)]
    pub payload: T,
}

pub fn json_bytes<T: Serialize>(
    config_hash: &str,
    rng_seed: u64,
    payload: T,
) -> Result<Vec<u8>, CliError> {
    let report = JsonReport {
        tool: "orbitlab",
        version: TOOL_VERSION,
        config_hash: config_hash.to_string(),
        rng_seed,
        payload,
    };
    let mut bytes = serde_json::to_vec_pretty(&report)
        .map_err(|e| CliError::Usage(format!("serialization failed: {}", e)))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Write to the path, or stdout when no path was given.
pub fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {}", path.display(), e))),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(bytes)
                .and_then(|_| lock.flush())
                .map_err(|e| CliError::Usage(format!("cannot write output: {}", e)))
        }
    }
}
