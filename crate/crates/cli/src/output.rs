//! Table rendering as CSV or JSON.

use serde_json::{json, Map, Value};

use crate::config::Format;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
}

impl Cell {
    fn csv(&self) -> String {
        match *self {
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Int(i) => i.to_string(),
        }
    }

    fn json(&self) -> Value {
        match *self {
            Cell::Float(x) => json!(x),
            Cell::Int(i) => json!(i),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

/// Run metadata carried in JSON output.
#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub command: String,
    pub config_sha256: String,
    pub angle_unit: String,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.headers.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, meta: &Metadata) -> String {
        let mut columns = Map::new();
        for (j, name) in self.headers.iter().enumerate() {
            let values: Vec<Value> = self.rows.iter().map(|r| r[j].json()).collect();
            columns.insert(name.clone(), Value::Array(values));
        }
        let doc = json!({
            "metadata": {
                "command": meta.command,
                "version": env!("CARGO_PKG_VERSION"),
                "config_sha256": meta.config_sha256,
                "angle_unit": meta.angle_unit,
                "rows": self.rows.len(),
            },
            "columns": Value::Object(columns),
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format, meta: &Metadata) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(meta),
        }
    }
}
