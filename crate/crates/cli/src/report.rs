//! Output envelope and rendering.

use serde_json::{json, Map, Value};

use crate::args::Format;

pub const SCHEMA: &str = "bellcomm.report";
pub const SCHEMA_VERSION: u32 = 1;

/// A command's result: named fields, rendered as a JSON envelope or an aligned table.
pub struct Report {
    command: String,
    fields: Map<String, Value>,
    /// Row-oriented data (reproduce runs), rendered as columns in table format.
    rows: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self { command: command.into(), fields: Map::new(), rows: None }
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.insert(key.to_string(), value.into());
    }

    pub fn rows(mut self, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        self.rows = Some((header, rows));
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "version": SCHEMA_VERSION,
            "command": self.command,
            "result": Value::Object(self.fields.clone()),
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.to_json()).expect("reports serialize"),
            Format::Table => self.render_table(),
        }
    }

    fn render_table(&self) -> String {
        let mut out = String::new();
        if let Some((header, rows)) = &self.rows {
            out.push_str(&columns(header, rows));
        }
        let skip = if self.rows.is_some() { Some("jobs") } else { None };
        let width = self.fields.keys().map(String::len).max().unwrap_or(0);
        for (key, value) in &self.fields {
            if Some(key.as_str()) == skip {
                continue;
            }
            let text = match value {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{key:<width$}  {text}\n"));
        }
        out
    }
}

fn columns(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_fields() {
        let r = Report::new("local").field("value", "3");
        let v = r.to_json();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["version"], SCHEMA_VERSION);
        assert_eq!(v["result"]["value"], "3");
    }

    #[test]
    fn table_aligns_columns() {
        let r = Report::new("reproduce").rows(vec!["id", "status"], vec![vec!["a".into(), "pass".into()]]);
        assert_eq!(r.render(Format::Table), "id  status\na   pass\n");
    }
}
