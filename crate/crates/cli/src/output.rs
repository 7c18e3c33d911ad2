use anyhow::{Context, Result};
use clap::ValueEnum;
use morphglide::table::fmt;
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Num(v as f64)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => fmt(*v),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Text(s) => json!(s),
            _ => Value::Null,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub comments: Vec<String>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            ..Default::default()
        }
    }

    pub fn comment(mut self, c: impl Into<String>) -> Self {
        self.comments.push(c.into());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Writes tables into one directory, stamping each with the tool version and
/// the config hash.
pub struct Emitter {
    pub dir: PathBuf,
    pub format: Format,
    pub config_hash: String,
    pub written: Vec<PathBuf>,
}

impl Emitter {
    pub fn new(dir: &Path, format: Format, config_hash: String) -> Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            format,
            config_hash,
            written: Vec::new(),
        })
    }

    fn stamp(&self) -> String {
        format!(
            "morphglide {} config_sha256={}",
            env!("CARGO_PKG_VERSION"),
            self.config_hash
        )
    }

    pub fn table(&mut self, stem: &str, table: &Table) -> Result<PathBuf> {
        let (ext, bytes) = match self.format {
            Format::Csv => ("csv", self.csv_bytes(table)),
            Format::Json => ("json", self.json_bytes(table)?),
        };
        self.bytes(&format!("{stem}.{ext}"), &bytes)
    }

    pub fn csv_bytes(&self, table: &Table) -> Vec<u8> {
        let mut comments = vec![self.stamp()];
        comments.extend(table.comments.iter().cloned());
        let rows = table.rows.iter().map(|r| r.iter().map(Cell::csv).collect());
        let mut out = Vec::new();
        morphglide::table::write_csv(&mut out, &comments, &table.header, rows).expect("writing to memory");
        out
    }

    fn json_bytes(&self, table: &Table) -> Result<Vec<u8>> {
        let rows: Vec<Value> = table
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        let doc = json!({
            "tool": format!("morphglide {}", env!("CARGO_PKG_VERSION")),
            "config_sha256": self.config_hash,
            "comments": table.comments,
            "columns": table.header,
            "rows": rows,
        });
        let mut bytes = serde_json::to_vec_pretty(&doc)?;
        bytes.push(b'\n');
        Ok(bytes)
    }

    /// Serialized value as JSON with the same provenance fields.
    pub fn json(&mut self, name: &str, value: &impl serde::Serialize) -> Result<PathBuf> {
        let doc = json!({
            "tool": format!("morphglide {}", env!("CARGO_PKG_VERSION")),
            "config_sha256": self.config_hash,
            "data": value,
        });
        let mut bytes = serde_json::to_vec_pretty(&doc)?;
        bytes.push(b'\n');
        self.bytes(name, &bytes)
    }

    /// Plain text with `#` provenance lines on top.
    pub fn text(&mut self, name: &str, body: &str) -> Result<PathBuf> {
        let text = format!("# {}\n{body}\n", self.stamp());
        self.bytes(name, text.as_bytes())
    }

    fn bytes(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.dir.join(name);
        let mut f = std::fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        f.write_all(bytes)?;
        log::info!("wrote {}", path.display());
        self.written.push(path.clone());
        Ok(path)
    }
}

/// Compact number for file names: `15`, `-30`, `0.26`.
pub fn tag(v: f64) -> String {
    fmt(v)
}
