//! Deterministic CSV and JSON rendering.

use serde_json::{Map, Number, Value};

use crate::config::OutputFormat;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Flag(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Flag(v)
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

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

/// Metadata plus a fixed-column table.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub meta: Vec<(String, Cell)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            meta: Vec::new(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Cell>) {
        self.meta.push((key.to_string(), value.into()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let idx = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| &r[idx]).collect())
    }

    pub fn render(&self, format: OutputFormat, digits: usize) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(digits),
            OutputFormat::Json => self.to_json(digits),
        }
    }

    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}={}\n", text(v, digits)));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| text(c, digits)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, digits: usize) -> String {
        let meta: Map<String, Value> = self.meta.iter().map(|(k, v)| (k.clone(), json(v, digits))).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), json(v, digits)))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut envelope = Map::new();
        envelope.insert("meta".into(), Value::Object(meta));
        envelope.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(envelope)).expect("json values serialize");
        s.push('\n');
        s
    }
}

/// `digits` significant digits in scientific notation; `-0` prints as `0`.
pub fn format_float(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{:.*e}", digits - 1, v)
}

fn text(cell: &Cell, digits: usize) -> String {
    match cell {
        Cell::Num(v) => format_float(*v, digits),
        Cell::Int(v) => v.to_string(),
        Cell::Text(s) => s.clone(),
        Cell::Flag(b) => b.to_string(),
    }
}

fn json(cell: &Cell, digits: usize) -> Value {
    match cell {
        Cell::Num(v) => {
            let rounded: f64 = format_float(*v, digits).parse().unwrap_or(f64::NAN);
            Number::from_f64(rounded)
                .map(Value::Number)
                .unwrap_or_else(|| Value::String(format_float(*v, digits)))
        }
        Cell::Int(v) => Value::Number((*v).into()),
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Flag(b) => Value::Bool(*b),
    }
}
