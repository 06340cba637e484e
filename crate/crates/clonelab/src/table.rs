//! Result tables, their CSV rendering and the per-run JSON summary.

use std::fmt::Write as _;

use serde::Serialize;

/// Significant digits used for every floating-point CSV field.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// One CSV field.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Float(v) => Some(v),
            Cell::Int(v) => Some(v as f64),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match *self {
            Cell::Bool(b) => Some(b),
            _ => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => quote(s),
        }
    }
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros removed,
/// positional for decimal exponents in `[-5, 12)` and scientific otherwise.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let sign = if v < 0.0 { "-" } else { "" };
    let body = if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        if exp >= 0 {
            let split = exp as usize + 1;
            let frac = digits[split..].trim_end_matches('0');
            if frac.is_empty() { digits[..split].to_string() } else { format!("{}.{}", &digits[..split], frac) }
        } else {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits.trim_end_matches('0'))
        }
    } else {
        let tail = digits[1..].trim_end_matches('0');
        let m = if tail.is_empty() { digits[..1].to_string() } else { format!("{}.{}", &digits[..1], tail) };
        format!("{m}e{exp}")
    };
    format!("{sign}{body}")
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Rows under a fixed header. A column named `pass` holds each row's verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| *h == name)
    }

    /// Values of a numeric column, `None` where the cell is not numeric.
    pub fn floats(&self, name: &str) -> Vec<Option<f64>> {
        let c = self.column(name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[c].as_f64()).collect()
    }

    pub fn bools(&self, name: &str) -> Vec<Option<bool>> {
        let c = self.column(name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[c].as_bool()).collect()
    }

    pub fn texts(&self, name: &str) -> Vec<String> {
        let c = self.column(name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows
            .iter()
            .map(|r| match &r[c] {
                Cell::Text(s) => s.clone(),
                other => other.render(),
            })
            .collect()
    }

    /// `(passed, failed)` over the `pass` column; rows without one are not counted.
    pub fn pass_counts(&self) -> (usize, usize) {
        let Some(c) = self.column("pass") else { return (0, 0) };
        self.rows.iter().fold((0, 0), |(p, f), r| match r[c] {
            Cell::Bool(true) => (p + 1, f),
            Cell::Bool(false) => (p, f + 1),
            _ => (p, f),
        })
    }

    /// Comma-separated, single header row, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(Cell::render).collect();
            let _ = writeln!(out, "{}", fields.join(","));
        }
        out
    }
}

/// A run-level verdict that decides the exit status.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }

    /// Every row of `table` has `pass = true`.
    pub fn all_rows(table: &Table) -> Self {
        let (p, f) = table.pass_counts();
        Check::new("all rows pass", f == 0, format!("{p} passed, {f} failed"))
    }
}

/// Everything a subcommand produces.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub subcommand: &'static str,
    pub seed: u64,
    pub tolerance: f64,
    pub table: Table,
    pub checks: Vec<Check>,
}

/// The JSON document written next to the CSV.
#[derive(Debug, Clone, Serialize)]
pub struct Summary<'a> {
    pub subcommand: &'a str,
    pub seed: u64,
    pub tolerance: f64,
    pub rows: usize,
    pub rows_passed: usize,
    pub rows_failed: usize,
    pub checks: &'a [Check],
    pub passed: bool,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn summary(&self) -> Summary<'_> {
        let (rows_passed, rows_failed) = self.table.pass_counts();
        Summary {
            subcommand: self.subcommand,
            seed: self.seed,
            tolerance: self.tolerance,
            rows: self.table.rows.len(),
            rows_passed,
            rows_failed,
            checks: &self.checks,
            passed: self.passed(),
        }
    }

    pub fn summary_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.summary()).expect("summary serializes");
        s.push('\n');
        s
    }
}
