use std::fmt::Write as _;

use heisenberg_fractional::type_set::fmt_num;
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => float_text(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) if v.is_finite() => fmt_num(*v),
            Cell::Float(v) => serde_json::to_string(&float_text(*v)).expect("string"),
            Cell::Text(s) => serde_json::to_string(s).expect("string"),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

fn float_text(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        fmt_num(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
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

/// A result table with a summary block.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(&'static str, Cell)>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            ..Default::default()
        }
    }

    pub fn render(&self, format: &str, command: &str, config: &Value) -> Result<String, CliError> {
        match format {
            "csv" => Ok(self.csv(command, config)),
            "json" => Ok(self.json(command, config)),
            other => Err(CliError::Config(format!("format `{other}` is not available for `{command}`"))),
        }
    }

    fn csv(&self, command: &str, config: &Value) -> String {
        let mut out = header_lines(command, config, "# ");
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        for (k, v) in &self.summary {
            let _ = writeln!(out, "# summary {k}={}", v.csv());
        }
        out
    }

    fn json(&self, command: &str, config: &Value) -> String {
        let mut out = String::new();
        let _ = write!(
            out,
            "{{\"tool\":\"hfrac\",\"version\":\"{}\",\"command\":{},\"config\":{},\"columns\":{},\"rows\":[",
            env!("CARGO_PKG_VERSION"),
            serde_json::to_string(command).expect("string"),
            config,
            serde_json::to_string(&self.columns).expect("strings"),
        );
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let cells: Vec<String> = row.iter().map(Cell::json).collect();
            let _ = write!(out, "[{}]", cells.join(","));
        }
        out.push_str("],\"summary\":{");
        for (i, (k, v)) in self.summary.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "\"{k}\":{}", v.json());
        }
        out.push_str("}}\n");
        out
    }
}

/// Tool version and resolved configuration as comment lines.
pub fn header_lines(command: &str, config: &Value, prefix: &str) -> String {
    format!(
        "{prefix}hfrac {} {command}\n{prefix}config {config}\n",
        env!("CARGO_PKG_VERSION")
    )
}
