//! Deterministic tabular output.
//!
//! CSV and JSON share one number rendering (shortest decimal that parses
//! back to the same float, via ryu — the same algorithm serde_json uses),
//! so the two formats encode byte-identical numbers. Tables whose rows
//! carry an exact-rational annotation also snap the reported probability
//! to that rational (the annotation asserts the value *is* p/q, so the
//! number column shows p/q evaluated in f64 rather than the contraction's
//! last-bit dust); sweep and figure data are reported raw. Tiny
//! probabilities are reported as exact zeros, and files are written
//! atomically.

use std::io::{self, Write};
use std::path::Path;

use serde_json::{json, Value};

use ejmnet::ratio::sniff;

use crate::config::{OutputFormat, RunConfig};

/// Probabilities below this are reported as exact zeros. Only reporting is
/// clamped; sums and everything upstream keep full precision.
pub const REPORT_CLAMP: f64 = 1e-14;

/// Largest denominator a rational annotation may use.
pub const MAX_RATIONAL_DEN: i64 = 4096;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Empty,
}

/// Column-named rows; the unit every command renders through.
#[derive(Debug, Clone)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the header",
        );
        self.rows.push(row);
    }

    /// Comma-separated values: header row, LF line endings, `.` decimal
    /// point, empty string for absent cells.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(render_cell).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// One top-level object: the resolved config, the column names, the
    /// rows as arrays (absent cells are null), and tool provenance.
    pub fn to_json(&self, config: &RunConfig) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| Value::Array(row.iter().map(json_cell).collect()))
            .collect();
        let doc = json!({
            "config": config,
            "columns": self.columns,
            "rows": rows,
            "provenance": {
                "tool": "ejmnet",
                "version": env!("CARGO_PKG_VERSION"),
            },
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("tables are serializable");
        text.push('\n');
        text
    }

    pub fn render(&self, config: &RunConfig) -> String {
        match config.format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(config),
        }
    }
}

fn render_cell(cell: &Cell) -> String {
    match cell {
        Cell::Int(i) => i.to_string(),
        Cell::Num(x) => fmt_f64(*x),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}

fn json_cell(cell: &Cell) -> Value {
    match cell {
        Cell::Int(i) => json!(i),
        Cell::Num(x) => json!(x),
        Cell::Text(s) => json!(s),
        Cell::Empty => Value::Null,
    }
}

/// Shortest decimal rendering that parses back to exactly `x`.
pub fn fmt_f64(x: f64) -> String {
    ryu::Buffer::new().format(x).to_string()
}

/// Reporting clamp for probabilities (see [`REPORT_CLAMP`]).
pub fn clamp_prob(p: f64) -> f64 {
    if p.abs() < REPORT_CLAMP {
        0.0
    } else {
        p
    }
}

/// The (probability, rational) cell pair for tables with a rational
/// column. When a rational p/q with q ≤ 4096 matches within `tol`, the
/// probability snaps to that rational's f64 value and the annotation
/// states the fraction; otherwise the probability is reported as-is and
/// the annotation is absent. `--tol 0` therefore disables both.
pub fn prob_cells(p: f64, tol: f64) -> (Cell, Cell) {
    let p = clamp_prob(p);
    match sniff(p, MAX_RATIONAL_DEN, tol) {
        Some(r) => (Cell::Num(r.to_f64()), Cell::Text(r.to_string())),
        None => (Cell::Num(p), Cell::Empty),
    }
}

/// Writes to stdout, or atomically (temp file in the target directory, then
/// rename) when a path is given.
pub fn write_output(text: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        None => io::stdout().write_all(text.as_bytes()),
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.persist(path).map_err(|e| e.error)?;
            Ok(())
        }
    }
}
