//! Tabular output as versioned CSV or JSON lines.

use crate::config::Format;
use crate::error::CliError;
use serde_json::{Map, Value};
use std::io::Write;
use std::path::Path;

pub const CSV_HEADER: &str = "# zscrew-csv v1";

#[derive(Clone, Debug)]
pub enum Cell {
    F(f64),
    I(i64),
    B(bool),
    S(String),
    Null,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::I(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::B(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Null, Cell::F)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::F(v) => format!("{v:e}"),
            Cell::I(v) => v.to_string(),
            Cell::B(v) => v.to_string(),
            Cell::S(s) => s.clone(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::F(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::I(v) => Value::from(*v),
            Cell::B(v) => Value::from(*v),
            Cell::S(s) => Value::from(s.as_str()),
            Cell::Null => Value::Null,
        }
    }
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        let mut s = String::new();
        match format {
            Format::Csv => {
                s.push_str(CSV_HEADER);
                s.push('\n');
                s.push_str(&self.columns.join(","));
                s.push('\n');
                for r in &self.rows {
                    s.push_str(&r.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
                    s.push('\n');
                }
            }
            Format::Jsonl => {
                for r in &self.rows {
                    s.push_str(&json_line(self.columns.iter().copied().zip(r.iter())));
                    s.push('\n');
                }
            }
        }
        s
    }
}

pub fn json_line<'a>(fields: impl Iterator<Item = (&'a str, &'a Cell)>) -> String {
    let mut m = Map::new();
    for (k, v) in fields {
        m.insert(k.to_string(), v.json());
    }
    Value::Object(m).to_string()
}

/// Writes to stdout, or to `path` through a temporary file renamed into
/// place so a failed run leaves nothing behind.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::data(format!("stdout: {e}"))),
            _ => Ok(()),
        };
    };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| CliError::config(format!("--out {}: not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let res = std::fs::write(&tmp, text).and_then(|_| std::fs::rename(&tmp, path));
    if let Err(e) = res {
        let _ = std::fs::remove_file(&tmp);
        return Err(CliError::data(format!("cannot write {}: {e}", path.display())));
    }
    Ok(())
}
