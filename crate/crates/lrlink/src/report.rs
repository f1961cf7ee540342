//! Row-oriented reports rendered as an aligned table, CSV or JSON.
//!
//! Table mode rounds floats to a per-column number of decimals; CSV and JSON
//! carry full precision, so both machine formats hold identical numbers.

use std::fmt::Write as _;

use anyhow::Result;
use clap::ValueEnum;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(u64),
    Bool(bool),
    /// Value and the decimals shown in table mode.
    Float(f64, usize),
    /// Float shown in scientific notation in table mode.
    Sci(f64),
    /// Float shown in full in every mode (parameters such as fractions).
    Exact(f64),
    Missing,
}

impl Cell {
    fn table_text(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Float(x, d) => format!("{x:.d$}"),
            Cell::Sci(x) => format!("{x:.3e}"),
            Cell::Exact(x) => x.to_string(),
            Cell::Missing => "-".into(),
        }
    }

    fn csv_text(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Float(x, _) | Cell::Sci(x) | Cell::Exact(x) => x.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(i) => Value::from(*i),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Float(x, _) | Cell::Sci(x) | Cell::Exact(x) => Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Missing => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Table => Ok(self.table()),
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn table(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::table_text).collect()).collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(j, c)| cells.iter().map(|r| r[j].len()).fold(c.len(), usize::max))
            .collect();
        let mut out = String::new();
        let mut line = |items: Vec<&str>| {
            let mut text = String::new();
            for (j, item) in items.iter().enumerate() {
                if j > 0 {
                    text.push_str("  ");
                }
                // text left, numbers right
                let numeric = item.starts_with(|c: char| c.is_ascii_digit() || c == '-') && j > 0;
                if numeric {
                    write!(text, "{item:>w$}", w = widths[j]).unwrap();
                } else {
                    write!(text, "{item:<w$}", w = widths[j]).unwrap();
                }
            }
            out.push_str(text.trim_end());
            out.push('\n');
        };
        line(self.columns.clone());
        for r in &cells {
            line(r.iter().map(String::as_str).collect());
        }
        out
    }

    fn csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::csv_text))?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    fn json(&self) -> Result<String> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> = self.columns.iter().map(|c| c.to_string()).zip(r.iter().map(Cell::json)).collect();
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows))?;
        s.push('\n');
        Ok(s)
    }
}
