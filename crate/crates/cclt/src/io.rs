//! Matrix files: CSV (one row per line, no header) and JSON `{"a": [[...]]}`;
//! complex matrices as JSON `{"re": [[...]], "im": [[...]]}`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use cclt_core::{ComplexScoreMatrix, ScoreMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// `.json` means JSON, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

#[derive(Deserialize)]
struct JsonMatrix {
    a: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct JsonComplex {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

pub fn read_matrix(path: &Path, format: Option<Format>) -> CliResult<ScoreMatrix> {
    let text = read(path)?;
    match format.unwrap_or_else(|| Format::from_path(path)) {
        Format::Csv => parse_csv(&text),
        Format::Json => parse_json(&text),
    }
}

pub fn read_complex(path: &Path) -> CliResult<ComplexScoreMatrix> {
    let m: JsonComplex = serde_json::from_str(&read(path)?)?;
    Ok(ComplexScoreMatrix::from_parts(&m.re, &m.im)?)
}

/// Rows and columns in errors are 1-based.
pub fn parse_csv(text: &str) -> CliResult<ScoreMatrix> {
    let mut reader =
        csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = record.position().map_or(i + 1, |p| p.line() as usize);
        let mut values = Vec::with_capacity(record.len());
        for (j, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| CliError::Parse {
                row,
                col: j + 1,
                msg: format!("'{field}' is not a decimal number"),
            })?;
            if !v.is_finite() {
                return Err(CliError::Parse { row, col: j + 1, msg: format!("'{field}' is not finite") });
            }
            values.push(v);
        }
        if let Some(first) = rows.first() {
            if values.len() != first.len() {
                return Err(CliError::Parse {
                    row,
                    col: values.len().min(first.len()) + 1,
                    msg: format!("row has {} entries, expected {}", values.len(), first.len()),
                });
            }
        }
        rows.push(values);
    }
    Ok(ScoreMatrix::from_rows(&rows)?)
}

pub fn parse_json(text: &str) -> CliResult<ScoreMatrix> {
    let m: JsonMatrix = serde_json::from_str(text)?;
    Ok(ScoreMatrix::from_rows(&m.a)?)
}

/// Wraps a report with the schema version and command name.
#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub schema: u32,
    pub command: &'a str,
    #[serde(flatten)]
    pub body: T,
}

pub const SCHEMA: u32 = 1;

/// Pretty JSON plus a trailing newline, to `path` or stdout.
pub fn emit<T: Serialize>(command: &str, body: T, path: Option<&PathBuf>) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(&Envelope { schema: SCHEMA, command, body })?;
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Write { path: p.clone(), source }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Write { path: PathBuf::from("<stdout>"), source }),
    }
}
