//! Report bundles and CSV tables written by every command.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use tsspec_core::rational::{self, Rational};

use crate::CliError;

/// Output of one command. `payload` depends only on the inputs and options;
/// `generated_at` is left out of `input_digest`.
#[derive(Debug, Clone, Serialize)]
pub struct ReportBundle {
    pub command: Value,
    pub input_digest: String,
    pub payload: Value,
    pub generated_at: u64,
}

impl ReportBundle {
    /// `inputs` are the raw bytes of every file the command read.
    pub fn new(command: Value, inputs: &[&[u8]], payload: Value) -> Self {
        let mut h = Sha256::new();
        h.update(command.to_string().as_bytes());
        for bytes in inputs {
            h.update((bytes.len() as u64).to_le_bytes());
            h.update(bytes);
        }
        let generated_at = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        ReportBundle { command, input_digest: hex::encode(h.finalize()), payload, generated_at }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bundle is plain JSON")
    }
}

/// A CSV table with a fixed header.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let io_err = |e: csv::Error| CliError::Io { path: path.display().to_string(), message: e.to_string() };
        let mut w = csv::Writer::from_path(path).map_err(io_err)?;
        w.write_record(&self.header).map_err(io_err)?;
        for row in &self.rows {
            w.write_record(row).map_err(io_err)?;
        }
        w.flush().map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
    }
}

/// Float as a 17-significant-digit string.
pub fn num(x: f64) -> Value {
    Value::String(rational::format_f64(x))
}

pub fn nums(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| num(x)).collect())
}

/// Rational as a `"p/q"` string.
pub fn rat(r: &Rational) -> Value {
    Value::String(rational::format(r))
}

pub fn rats(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}
