//! Report envelope and locale-free output.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::CliError;

pub type Config = BTreeMap<&'static str, Value>;

/// Every JSON report: schema tag, tool version, resolved config, seed and
/// wall-clock duration around the command-specific `result`.
#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub schema: &'static str,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: &'a Config,
    pub seed: Option<u64>,
    pub duration_seconds: f64,
    pub result: T,
}

pub fn envelope<'a, T: Serialize>(
    command: &'static str,
    config: &'a Config,
    seed: Option<u64>,
    started: Instant,
    result: T,
) -> Envelope<'a, T> {
    Envelope {
        schema: dfsqft::SCHEMA,
        tool: "dfsqft",
        version: env!("CARGO_PKG_VERSION"),
        command,
        config,
        seed,
        duration_seconds: started.elapsed().as_secs_f64(),
        result,
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Failure(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Writes `text` to `out`, or standard output when `None`.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Comma-separated, LF-terminated rows. Floats use Rust's shortest
/// round-trip formatting, which never depends on the locale.
#[derive(Default)]
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut c = Csv::default();
        c.row(header.iter().map(|h| h.to_string()));
        c
    }

    pub fn row(&mut self, fields: impl IntoIterator<Item = String>) {
        let fields: Vec<String> = fields.into_iter().collect();
        debug_assert!(fields.iter().all(|f| !f.contains([',', '\n', '"'])));
        self.buf.push_str(&fields.join(","));
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}
