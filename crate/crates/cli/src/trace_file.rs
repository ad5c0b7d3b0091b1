//! Trace files: JSON documents or CSV tables.
//!
//! JSON: `{"atoms":["p","q"],"states":[[0.1,1.0],[0.2,0.0]],"loop":1}`.
//!
//! CSV: an optional first line `# loop=K`, a header row of atom names, then
//! one row per state.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ftl_core::{CoreError, Trace};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TraceFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON trace: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed CSV trace: {0}")]
    Csv(#[from] csv::Error),
    #[error("bad value `{value}` in row {row}, column {column}")]
    BadValue {
        row: usize,
        column: usize,
        value: String,
    },
    #[error("bad loop directive `{0}`, expected `# loop=K`")]
    BadDirective(String),
    #[error("invalid trace: {0}")]
    Invalid(#[from] CoreError),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TraceDoc {
    atoms: Vec<String>,
    states: Vec<Vec<f64>>,
    #[serde(default, rename = "loop", skip_serializing_if = "Option::is_none")]
    loop_start: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// By extension; anything but `.csv` is JSON.
    pub fn for_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

pub fn read(path: &Path) -> Result<Trace, TraceFileError> {
    let text = fs::read_to_string(path).map_err(|source| TraceFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    match Format::for_path(path) {
        Format::Json if !text.trim_start().starts_with('{') => parse_csv(&text),
        Format::Json => parse_json(&text),
        Format::Csv => parse_csv(&text),
    }
}

pub fn parse_json(text: &str) -> Result<Trace, TraceFileError> {
    let doc: TraceDoc = serde_json::from_str(text)?;
    Ok(Trace::new(doc.atoms, doc.states, doc.loop_start)?)
}

pub fn parse_csv(text: &str) -> Result<Trace, TraceFileError> {
    let mut loop_start = None;
    let mut body = text;
    if let Some(first) = text.lines().next() {
        if let Some(directive) = first.trim().strip_prefix('#') {
            let k = directive
                .trim()
                .strip_prefix("loop=")
                .and_then(|k| k.trim().parse().ok())
                .ok_or_else(|| TraceFileError::BadDirective(first.to_string()))?;
            loop_start = Some(k);
            body = &text[first.len()..];
            body = body.strip_prefix("\r\n").or(body.strip_prefix('\n')).unwrap_or(body);
        }
    }
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(body.as_bytes());
    let atoms: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let mut states = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let values = record
            .iter()
            .enumerate()
            .map(|(column, v)| {
                v.parse::<f64>().map_err(|_| TraceFileError::BadValue {
                    row,
                    column,
                    value: v.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        states.push(values);
    }
    Ok(Trace::new(atoms, states, loop_start)?)
}

fn rows(trace: &Trace) -> Vec<Vec<f64>> {
    trace
        .states()
        .iter()
        .map(|s| s.iter().map(|d| d.value()).collect())
        .collect()
}

pub fn to_json(trace: &Trace) -> String {
    let doc = TraceDoc {
        atoms: trace.atoms().to_vec(),
        states: rows(trace),
        loop_start: trace.loop_start(),
    };
    serde_json::to_string(&doc).expect("trace serializes")
}

pub fn to_csv(trace: &Trace) -> String {
    let mut out = String::new();
    if let Some(k) = trace.loop_start() {
        let _ = writeln!(out, "# loop={k}");
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(trace.atoms()).expect("in-memory write");
    for row in rows(trace) {
        w.write_record(row.iter().map(|v| format!("{v:?}"))).expect("in-memory write");
    }
    out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf-8"));
    out
}

pub fn write(path: &Path, trace: &Trace) -> std::io::Result<()> {
    let text = match Format::for_path(path) {
        Format::Json => to_json(trace) + "\n",
        Format::Csv => to_csv(trace),
    };
    fs::write(path, text)
}
