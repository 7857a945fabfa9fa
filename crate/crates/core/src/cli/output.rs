//! Flat records rendered as CSV or JSON.
//!
//! Floats are written with 16 significant digits in exponent form, the same
//! text in both formats. Non-finite floats become empty CSV cells and JSON
//! `null`.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Null,
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}
impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v)
    }
}
impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as u64)
    }
}
impl From<u32> for Value {
    fn from(v: u32) -> Self {
        Value::Int(u64::from(v))
    }
}
impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}
impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}
impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Null, Into::into)
    }
}

pub fn format_float(v: f64) -> Option<String> {
    v.is_finite().then(|| format!("{v:.15e}"))
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::Float(v) => format_float(*v).unwrap_or_default(),
            Value::Int(v) => v.to_string(),
            Value::Bool(v) => v.to_string(),
            Value::Text(s) if s.contains([',', '"', '\n']) => {
                format!("\"{}\"", s.replace('"', "\"\""))
            }
            Value::Text(s) => s.clone(),
            Value::Null => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Value::Float(v) => format_float(*v).unwrap_or_else(|| "null".into()),
            Value::Int(v) => v.to_string(),
            Value::Bool(v) => v.to_string(),
            Value::Text(s) => serde_json::to_string(s).expect("string serialization"),
            Value::Null => "null".into(),
        }
    }
}

/// Ordered key/value pairs; one CSV row or one flat JSON object.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(pub Vec<(&'static str, Value)>);

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &'static str, value: impl Into<Value>) -> &mut Self {
        self.0.push((key, value.into()));
        self
    }

    pub fn with(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.push(key, value);
        self
    }

    pub fn extend(&mut self, other: Record) {
        self.0.extend(other.0);
    }

    fn json(&self) -> String {
        let fields: Vec<String> = self
            .0
            .iter()
            .map(|(k, v)| format!("{}:{}", serde_json::to_string(k).expect("key"), v.json()))
            .collect();
        format!("{{{}}}", fields.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}', expected csv|json")),
        }
    }
}

/// What a subcommand produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    /// A single report: JSON object, or a one-row CSV.
    Report(Record),
    /// A table with a fixed header: CSV rows, or a JSON array of objects.
    Table {
        header: Vec<&'static str>,
        rows: Vec<Record>,
    },
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match (self, format) {
            (Output::Report(r), Format::Json) => {
                out.push_str(&r.json());
                out.push('\n');
            }
            (Output::Report(r), Format::Csv) => {
                let header: Vec<&str> = r.0.iter().map(|(k, _)| *k).collect();
                write_csv(&mut out, &header, std::slice::from_ref(r));
            }
            (Output::Table { rows, .. }, Format::Json) => {
                let items: Vec<String> = rows.iter().map(Record::json).collect();
                let _ = writeln!(out, "[{}]", items.join(",\n"));
            }
            (Output::Table { header, rows }, Format::Csv) => write_csv(&mut out, header, rows),
        }
        out
    }
}

fn write_csv(out: &mut String, header: &[&str], rows: &[Record]) {
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.0.iter().map(|(_, v)| v.csv()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
}

pub fn write_output(text: &str, path: Option<&Path>) -> io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()
        }
    }
}
