//! Tabular output shared by every subcommand.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
    Human,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "human" | "text" => Ok(Format::Human),
            other => Err(format!(
                "unknown format {other:?}; expected csv, json or human"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub label: String,
    pub values: Vec<Option<f64>>,
}

/// Rectangular table: every row has one value per column.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputTable {
    pub name: String,
    pub caption: String,
    pub columns: Vec<String>,
    rows: Vec<Row>,
}

impl OutputTable {
    pub fn new(name: impl Into<String>, caption: impl Into<String>, columns: &[&str]) -> Self {
        OutputTable {
            name: name.into(),
            caption: caption.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row. Panics if the arity does not match the columns.
    pub fn push(&mut self, label: impl Into<String>, values: Vec<Option<f64>>) {
        assert_eq!(
            values.len(),
            self.columns.len(),
            "row arity must match column count"
        );
        self.rows.push(Row {
            label: label.into(),
            values,
        });
    }

    /// Shorthand for rows without missing cells.
    pub fn push_values(&mut self, label: impl Into<String>, values: &[f64]) {
        self.push(label, values.iter().copied().map(Some).collect());
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

pub fn render(tables: &[OutputTable], format: Format) -> String {
    match format {
        Format::Csv => render_csv(tables),
        Format::Json => render_json(tables),
        Format::Human => render_human(tables),
    }
}

fn render_csv(tables: &[OutputTable]) -> String {
    let mut out = String::new();
    for (i, t) in tables.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for line in t.caption.lines() {
            writeln!(out, "# {line}").unwrap();
        }
        write!(out, "label").unwrap();
        for c in &t.columns {
            write!(out, ",{c}").unwrap();
        }
        out.push('\n');
        for row in &t.rows {
            out.push_str(&row.label);
            for v in &row.values {
                out.push(',');
                if let Some(v) = v {
                    // f64 Display is shortest round-trip and never uses an exponent
                    write!(out, "{v}").unwrap();
                }
            }
            out.push('\n');
        }
    }
    out
}

fn render_json(tables: &[OutputTable]) -> String {
    let rows: Vec<Value> = tables
        .iter()
        .flat_map(|t| {
            t.rows.iter().map(move |row| {
                let mut obj = Map::new();
                obj.insert("table".into(), Value::String(t.name.clone()));
                obj.insert("label".into(), Value::String(row.label.clone()));
                for (c, v) in t.columns.iter().zip(&row.values) {
                    let cell = v
                        .and_then(serde_json::Number::from_f64)
                        .map_or(Value::Null, Value::Number);
                    obj.insert(c.clone(), cell);
                }
                Value::Object(obj)
            })
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("json rows serialize");
    s.push('\n');
    s
}

/// Integers for |x| >= 100 or integral values, four significant digits below.
pub fn human_number(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x.abs() >= 100.0 || (x.fract() == 0.0 && x.abs() < 1e15) {
        return format!("{:.0}", x.round());
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = 3 - x.abs().log10().floor() as i32;
    format!("{:.*}", digits.max(0) as usize, x)
}

fn render_human(tables: &[OutputTable]) -> String {
    let mut out = String::new();
    for (i, t) in tables.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        writeln!(out, "{}", t.caption).unwrap();
        let mut grid: Vec<Vec<String>> = vec![std::iter::once("label".to_string())
            .chain(t.columns.iter().cloned())
            .collect()];
        for row in &t.rows {
            grid.push(
                std::iter::once(row.label.clone())
                    .chain(
                        row.values
                            .iter()
                            .map(|v| v.map(human_number).unwrap_or_default()),
                    )
                    .collect(),
            );
        }
        let widths: Vec<usize> = (0..grid[0].len())
            .map(|c| grid.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        for r in &grid {
            let cells: Vec<String> = r
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(c, (cell, w))| {
                    if c == 0 {
                        format!("{cell:<w$}")
                    } else {
                        format!("{cell:>w$}")
                    }
                })
                .collect();
            writeln!(out, "{}", cells.join("  ").trim_end()).unwrap();
        }
    }
    out
}

/// Parses output of the csv renderer back into tables. Names are not part
/// of the csv encoding and come back empty.
pub fn parse_csv(text: &str) -> Result<Vec<OutputTable>, String> {
    let mut tables = Vec::new();
    for block in text.split("\n\n").filter(|b| !b.trim().is_empty()) {
        let mut caption = Vec::new();
        let mut lines = block.lines().peekable();
        while let Some(line) = lines.peek() {
            match line.strip_prefix("# ") {
                Some(c) => {
                    caption.push(c.to_string());
                    lines.next();
                }
                None => break,
            }
        }
        let header = lines.next().ok_or("missing header row")?;
        let columns: Vec<&str> = header.split(',').skip(1).collect();
        let mut table = OutputTable::new("", caption.join("\n"), &columns);
        for line in lines {
            let mut cells = line.split(',');
            let label = cells.next().unwrap_or_default();
            let values = cells
                .map(|c| {
                    if c.is_empty() {
                        Ok(None)
                    } else {
                        c.parse::<f64>()
                            .map(Some)
                            .map_err(|e| format!("{c:?}: {e}"))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            if values.len() != table.columns.len() {
                return Err(format!("row {label:?} is not rectangular"));
            }
            table.push(label, values);
        }
        tables.push(table);
    }
    Ok(tables)
}

/// Parses output of the json renderer, regrouping rows by their `table` key.
pub fn parse_json(text: &str) -> Result<Vec<OutputTable>, String> {
    let rows: Vec<Map<String, Value>> = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let mut tables: Vec<OutputTable> = Vec::new();
    for obj in rows {
        let name = obj.get("table").and_then(Value::as_str).unwrap_or_default();
        let label = obj.get("label").and_then(Value::as_str).unwrap_or_default();
        let columns: Vec<&str> = obj
            .keys()
            .map(String::as_str)
            .filter(|k| *k != "table" && *k != "label")
            .collect();
        if tables.last().is_none_or(|t| t.name != name) {
            tables.push(OutputTable::new(name, "", &columns));
        }
        let table = tables.last_mut().unwrap();
        if table.columns != columns {
            return Err(format!("row {label:?} is not rectangular"));
        }
        let values = columns.iter().map(|c| obj[*c].as_f64()).collect();
        table.push(label, values);
    }
    Ok(tables)
}
