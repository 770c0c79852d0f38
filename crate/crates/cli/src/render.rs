use std::fmt::Write as _;

use serde::Serialize;

use rankgrad::Fraction;

use crate::config::{Format, RunConfig};
use crate::error::CliError;

pub const TOOL: &str = "rankgrad";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug)]
pub enum Cell {
    Int(i128),
    Text(String),
    Bool(bool),
    Frac(Fraction),
    Empty,
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i128)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i128)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<Fraction> for Cell {
    fn from(x: Fraction) -> Self {
        Cell::Frac(x)
    }
}

impl From<&Fraction> for Cell {
    fn from(x: &Fraction) -> Self {
        Cell::Frac(x.clone())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.into())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(x) => x.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Frac(f) => f.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

/// Rows of one table; fraction columns are detected from the cells.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Table {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn fraction_columns(&self) -> Vec<bool> {
        (0..self.columns.len()).map(|j| self.rows.iter().any(|r| matches!(r[j], Cell::Frac(_)))).collect()
    }
}

/// What a command hands back for rendering.
#[derive(Debug)]
pub struct Output {
    pub result: serde_json::Value,
    /// Key facts shown above the table in text output.
    pub summary: Vec<(String, String)>,
    pub table: Table,
    pub truncated: Option<String>,
    /// Set when the computation finished but a checked invariant failed;
    /// the report is still emitted.
    pub failure: Option<CliError>,
}

impl Output {
    pub fn new(result: serde_json::Value, table: Table) -> Output {
        Output { result, summary: Vec::new(), table, truncated: None, failure: None }
    }

    pub fn summary(mut self, key: &str, value: impl ToString) -> Output {
        self.summary.push((key.into(), value.to_string()));
        self
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    truncated: &'a Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<String>,
    result: &'a serde_json::Value,
}

pub fn render(config: &RunConfig, out: &Output) -> String {
    match config.format {
        Format::Json => json(config, out),
        Format::Csv => csv(config, out),
        Format::Text => text(config, out),
    }
}

fn json(config: &RunConfig, out: &Output) -> String {
    let report = JsonReport {
        tool: TOOL,
        version: VERSION,
        config,
        truncated: &out.truncated,
        failure: out.failure.as_ref().map(ToString::to_string),
        result: &out.result,
    };
    let mut s = serde_json::to_string_pretty(&report).expect("reports serialize");
    s.push('\n');
    s
}

fn header_lines(config: &RunConfig, out: &Output, prefix: &str) -> String {
    let mut s = String::new();
    writeln!(s, "{prefix}{TOOL} {VERSION}").unwrap();
    writeln!(s, "{prefix}config: {}", serde_json::to_string(config).expect("config serializes")).unwrap();
    if let Some(t) = &out.truncated {
        writeln!(s, "{prefix}TRUNCATED: {t}").unwrap();
    }
    if let Some(f) = &out.failure {
        writeln!(s, "{prefix}FAILURE: {f}").unwrap();
    }
    s
}

/// Metadata lines start with `#`. Every fraction column is followed by a
/// decimal column whose header ends in `(approx)`.
fn csv(config: &RunConfig, out: &Output) -> String {
    let mut s = header_lines(config, out, "# ");
    for (k, v) in &out.summary {
        writeln!(s, "# {k}: {v}").unwrap();
    }
    let fracs = out.table.fraction_columns();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = Vec::new();
    for (c, &f) in out.table.columns.iter().zip(&fracs) {
        header.push(c.clone());
        if f {
            header.push(format!("{c} (approx)"));
        }
    }
    w.write_record(&header).expect("in-memory write");
    for row in &out.table.rows {
        let mut rec = Vec::new();
        for (cell, &f) in row.iter().zip(&fracs) {
            rec.push(cell.text());
            if f {
                rec.push(match cell {
                    Cell::Frac(x) => format!("{:.6}", x.approx()),
                    _ => String::new(),
                });
            }
        }
        w.write_record(&rec).expect("in-memory write");
    }
    s.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8"));
    s
}

fn text(config: &RunConfig, out: &Output) -> String {
    let mut s = header_lines(config, out, "");
    let key_width = out.summary.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    for (k, v) in &out.summary {
        writeln!(s, "{k:<key_width$}  {v}").unwrap();
    }
    let t = &out.table;
    if t.columns.is_empty() {
        return s;
    }
    s.push('\n');
    let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(Cell::text).collect()).collect();
    let widths: Vec<usize> = (0..t.columns.len())
        .map(|j| cells.iter().map(|r| r[j].chars().count()).chain([t.columns[j].chars().count()]).max().unwrap_or(0))
        .collect();
    let line = |items: &[String]| {
        let padded: Vec<String> = items.iter().zip(&widths).map(|(x, &w)| format!("{x:>w$}")).collect();
        padded.join("  ").trim_end().to_string()
    };
    writeln!(s, "{}", line(&t.columns)).unwrap();
    for r in &cells {
        writeln!(s, "{}", line(r)).unwrap();
    }
    s
}
