//! Tabular output in CSV, TSV or JSON with fixed 4-decimal proportions.

use std::io::Write;
use std::path::Path;

use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::store::Proportion;

pub const DECIMALS: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Tsv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(u64),
    Bool(bool),
    /// Exact proportion; empty/null when absent.
    Prop(Option<Proportion>),
    /// Floating value; empty/null when absent.
    Float(Option<f64>),
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<u64> for Cell {
    fn from(n: u64) -> Self {
        Cell::Int(n)
    }
}

/// `numerator / denominator` rounded half-to-even at 4 decimals, computed
/// exactly.
pub fn format_proportion(p: Proportion) -> String {
    let scale = 10u128.pow(DECIMALS);
    let num = p.numerator as u128 * scale;
    let den = p.denominator as u128;
    let (mut q, r) = (num / den, num % den);
    if 2 * r > den || (2 * r == den && q % 2 == 1) {
        q += 1;
    }
    format!("{}.{:0width$}", q / scale, q % scale, width = DECIMALS as usize)
}

/// 4-decimal rendering of a float (half-to-even on the binary value).
pub fn format_float(x: f64) -> String {
    let s = format!("{:.*}", DECIMALS as usize, x);
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Prop(p) => p.map(format_proportion).unwrap_or_default(),
            Cell::Float(x) => x.map(format_float).unwrap_or_default(),
        }
    }

    fn json(&self) -> Value {
        let decimal = |s: String| {
            let x: f64 = s.parse().expect("formatted decimal");
            Number::from_f64(x).map_or(Value::Null, Value::Number)
        };
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(n) => Value::Number((*n).into()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Prop(Some(p)) => decimal(format_proportion(*p)),
            Cell::Float(Some(x)) if x.is_finite() => decimal(format_float(*x)),
            Cell::Prop(None) | Cell::Float(_) => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Csv => self.render_delimited(b','),
            Format::Tsv => self.render_delimited(b'\t'),
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, cell)| (c.to_string(), cell.json()))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut out = serde_json::to_vec_pretty(&Value::Array(rows))
                    .map_err(|e| Error::io("json output", e.into()))?;
                out.push(b'\n');
                Ok(out)
            }
        }
    }

    fn render_delimited(&self, delimiter: u8) -> Result<Vec<u8>> {
        let mut writer = csv::WriterBuilder::new()
            .delimiter(delimiter)
            .from_writer(Vec::new());
        let to_io = |e: csv::Error| Error::io("table output", e.into());
        writer.write_record(&self.columns).map_err(to_io)?;
        for row in &self.rows {
            writer
                .write_record(row.iter().map(Cell::text))
                .map_err(to_io)?;
        }
        writer
            .into_inner()
            .map_err(|e| Error::io("table output", e.into_error()))
    }
}

/// Writes `bytes` to a temporary file beside `path`, then renames it into
/// place; `path` is untouched on failure.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io_at(path, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io_at(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io_at(path, e))?;
    tmp.persist(path).map_err(|e| Error::io_at(path, e.error))?;
    Ok(())
}
