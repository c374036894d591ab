//! Rectangular result tables and their CSV rendering.

use std::fmt::Write as _;
use std::io;

use crate::error::{Error, Result};

/// Significant digits used for reals.
pub const SIGNIFICANT_DIGITS: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_owned())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

/// Fixed-point decimal with [`SIGNIFICANT_DIGITS`] significant digits.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (SIGNIFICANT_DIGITS as i64 - 1 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding can produce "-0.000…"
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        return s.trim_start_matches('-').to_owned();
    }
    s
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => format_real(*x),
            Cell::Text(t) if t.contains([',', '"', '\n']) => format!("\"{}\"", t.replace('"', "\"\"")),
            Cell::Text(t) => t.clone(),
            Cell::Empty => String::new(),
        }
    }
}

/// A header, rows in a fixed order, and the invocation that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct OutputTable {
    headers: Vec<String>,
    rows: Vec<Vec<Cell>>,
    provenance: Vec<String>,
}

impl OutputTable {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self { headers: headers.into_iter().map(Into::into).collect(), rows: Vec::new(), provenance: Vec::new() }
    }

    pub fn with_provenance(mut self, line: impl Into<String>) -> Self {
        self.provenance.push(line.into());
        self
    }

    pub fn push_row(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.headers.len() {
            return Err(Error::Shape(format!("row has {} cells, table has {} columns", row.len(), self.headers.len())));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn headers(&self) -> &[String] {
        &self.headers
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    /// Header plus rows, comma separated, LF terminated.
    pub fn to_csv(&self) -> String {
        let mut out = self.headers.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// CSV preceded by `# `-prefixed provenance lines.
    pub fn to_annotated_csv(&self) -> String {
        let mut out = String::new();
        for line in &self.provenance {
            let _ = writeln!(out, "# {line}");
        }
        out + &self.to_csv()
    }

    pub fn write_csv(&self, mut w: impl io::Write) -> io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }
}
