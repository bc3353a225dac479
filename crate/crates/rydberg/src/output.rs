//! Tables (text, CSV, JSON) and the run manifest.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

/// One table cell. Floats render with 17 significant digits in files.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    pub fn opt(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }

    fn file_repr(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn screen_repr(&self) -> String {
        match self {
            Cell::Float(v) => format!("{v:.6e}"),
            other => other.file_repr(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Int(v) => (*v).into(),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(serde_json::Value::Null, Into::into),
            Cell::Text(s) => s.clone().into(),
            Cell::Bool(b) => (*b).into(),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Column names carry their unit as a suffix (`_ry`, `_bohr`, `_hz`, ...).
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| *h == name)
    }

    pub fn write_csv(&self, path: &Path) -> io::Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::file_repr))?;
        }
        w.flush()
    }

    pub fn write_json(&self, path: &Path) -> io::Result<()> {
        let rows: Vec<serde_json::Map<String, serde_json::Value>> = self
            .rows
            .iter()
            .map(|row| {
                self.header
                    .iter()
                    .zip(row)
                    .map(|(h, c)| ((*h).to_owned(), c.json()))
                    .collect()
            })
            .collect();
        fs::write(path, serde_json::to_string_pretty(&rows)? + "\n")
    }

    /// Aligned text rendering for the terminal.
    pub fn render(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::screen_repr).collect())
            .collect();
        let widths: Vec<usize> = (0..self.header.len())
            .map(|k| {
                cells
                    .iter()
                    .map(|r| r[k].len())
                    .chain([self.header[k].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        let line = |out: &mut String, items: &mut dyn Iterator<Item = &str>| {
            let parts: Vec<String> = items.zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        line(&mut out, &mut self.header.iter().copied());
        for r in &cells {
            line(&mut out, &mut r.iter().map(String::as_str));
        }
        out
    }
}

/// Record of one CLI run, written next to its outputs even on failure.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub params: String,
    pub k_max: Option<usize>,
    pub r_max_factor: f64,
    pub states: Vec<String>,
    pub wall_clock_s: f64,
    pub outputs: Vec<String>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<serde_json::Value>,
}

impl RunManifest {
    pub fn path(out_dir: &Path, command: &str) -> PathBuf {
        out_dir.join(format!("{command}.manifest.json"))
    }

    pub fn write(&self, out_dir: &Path) -> io::Result<PathBuf> {
        let path = Self::path(out_dir, &self.command);
        fs::write(&path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_cells_keep_17_digits() {
        let c = Cell::Float(0.1);
        assert_eq!(c.file_repr(), "1.0000000000000001e-1");
        let back: f64 = c.file_repr().parse().unwrap();
        assert_eq!(back, 0.1);
        assert_eq!(Cell::Empty.file_repr(), "");
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut t = Table::new(vec!["n", "energy_ry", "note"]);
        t.push(vec![15u32.into(), (-1.0f64 / 3.0).into(), "x".into()]);
        let p = dir.path().join("t.csv");
        t.write_csv(&p).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(text, "n,energy_ry,note\n15,-3.3333333333333331e-1,x\n");
        assert!(t.render().contains("energy_ry"));
    }
}
