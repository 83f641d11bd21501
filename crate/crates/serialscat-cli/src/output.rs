use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::config::Format;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    B(bool),
    S(String),
    Empty,
}

impl Cell {
    fn csv(&self, out: &mut String) {
        match self {
            Cell::F(x) => write!(out, "{x:.16e}").unwrap(),
            Cell::I(i) => write!(out, "{i}").unwrap(),
            Cell::B(b) => out.push(if *b { '1' } else { '0' }),
            Cell::S(s) => out.push_str(s),
            Cell::Empty => {}
        }
    }

    fn json(&self) -> Value {
        match self {
            // non-finite floats have no JSON spelling
            Cell::F(x) => serde_json::Number::from_f64(*x).map(Value::Number).unwrap_or(Value::Null),
            Cell::I(i) => Value::from(*i),
            Cell::B(b) => Value::Bool(*b),
            Cell::S(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    columns: &'a [String],
    rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            for (i, c) in row.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                c.csv(&mut s);
            }
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let t = JsonTable { columns: &self.columns, rows: self.rows.iter().map(|r| r.iter().map(Cell::json).collect()).collect() };
        let mut s = serde_json::to_string_pretty(&t).expect("table serialises");
        s.push('\n');
        s
    }

    pub fn render(&self, f: Format) -> String {
        match f {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

pub fn emit(text: &str, path: Option<&Path>) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(io)?;
            out.flush().map_err(io)
        }
    }
}
