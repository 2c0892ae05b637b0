use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};

/// Tabular form of a result, used for `--csv`.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Table {
        Table {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

pub struct Report {
    pub command: &'static str,
    pub params: Value,
    pub results: Value,
    pub diagnostics: Vec<String>,
    pub text: String,
    pub table: Option<Table>,
}

impl Report {
    pub fn new(command: &'static str, params: Value, results: impl Serialize) -> Report {
        Report {
            command,
            params,
            results: serde_json::to_value(results).expect("results serialize"),
            diagnostics: Vec::new(),
            text: String::new(),
            table: None,
        }
    }

    pub fn text(mut self, text: String) -> Report {
        self.text = text;
        self
    }

    pub fn table(mut self, table: Table) -> Report {
        self.table = Some(table);
        self
    }

    pub fn note(mut self, line: impl Into<String>) -> Report {
        self.diagnostics.push(line.into());
        self
    }

    pub fn to_json(&self) -> String {
        let envelope = json!({
            "command": self.command,
            "params": self.params,
            "results": self.results,
            "diagnostics": self.diagnostics,
            "version": env!("CARGO_PKG_VERSION"),
        });
        let mut out = serde_json::to_string_pretty(&envelope).expect("envelope serializes");
        out.push('\n');
        out
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        match &self.table {
            Some(table) => {
                writer.write_record(&table.header).expect("in-memory write");
                for row in &table.rows {
                    writer.write_record(row).expect("in-memory write");
                }
            }
            None => {
                writer.write_record(["key", "value"]).expect("in-memory write");
                let mut flat = Vec::new();
                flatten("", &self.results, &mut flat);
                for (key, value) in flat {
                    writer.write_record([key, value]).expect("in-memory write");
                }
            }
        }
        String::from_utf8(writer.into_inner().expect("flush")).expect("csv is utf-8")
    }

    pub fn to_text(&self) -> String {
        let mut out = self.text.clone();
        for line in &self.diagnostics {
            out.push_str("note: ");
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}

/// Dotted-path flattening of a JSON value into scalar leaves.
fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&join(k), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), v, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

pub fn emit(body: &str, out: Option<&std::path::Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, body),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(body.as_bytes())?;
            lock.flush()
        }
    }
}

/// Shortest round-trip rendering that always shows a decimal point.
pub fn real(x: f64) -> String {
    format!("{x:?}")
}
