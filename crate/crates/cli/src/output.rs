//! One record per invocation, rendered as `key: value` lines or as a JSON
//! object with the same field order.

use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Default)]
pub struct Record {
    fields: Map<String, Value>,
    /// Free-form text appended after the fields in text mode only.
    trailer: Option<String>,
}

impl Record {
    pub fn new(command: &str) -> Self {
        let mut r = Record::default();
        r.set("command", command);
        r
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    pub fn trailer(&mut self, text: String) -> &mut Self {
        self.trailer = Some(text);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&Value::Object(self.fields.clone()))
                    .expect("records serialize");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut out = String::new();
                write_fields(&mut out, &self.fields, 0);
                if let Some(t) = &self.trailer {
                    out.push_str(t);
                }
                out
            }
        }
    }
}

fn is_int_list(items: &[Value]) -> bool {
    !items.is_empty() && items.iter().all(Value::is_i64)
}

fn inline(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) if !s.contains('\n') => Some(s.clone()),
        Value::Array(items) if items.is_empty() => Some("[]".into()),
        // Chip vectors print in the same CSV form the CLI accepts.
        Value::Array(items) if is_int_list(items) => Some(
            items
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(","),
        ),
        _ => None,
    }
}

fn write_fields(out: &mut String, fields: &Map<String, Value>, depth: usize) {
    let pad = "  ".repeat(depth);
    for (k, v) in fields {
        match (inline(v), v) {
            (Some(s), _) => out.push_str(&format!("{pad}{k}: {s}\n")),
            (None, Value::String(s)) => {
                out.push_str(&format!("{pad}{k}:\n"));
                for line in s.lines() {
                    out.push_str(&format!("{pad}  {line}\n"));
                }
            }
            (None, Value::Object(m)) => {
                out.push_str(&format!("{pad}{k}:\n"));
                write_fields(out, m, depth + 1);
            }
            (None, Value::Array(items)) => {
                out.push_str(&format!("{pad}{k}:\n"));
                for item in items {
                    match (inline(item), item) {
                        (Some(s), _) => out.push_str(&format!("{pad}  - {s}\n")),
                        (None, Value::Object(m)) => {
                            let mut inner = String::new();
                            write_fields(&mut inner, m, 0);
                            for (i, line) in inner.lines().enumerate() {
                                let bullet = if i == 0 { "- " } else { "  " };
                                out.push_str(&format!("{pad}  {bullet}{line}\n"));
                            }
                        }
                        (None, other) => out.push_str(&format!("{pad}  - {other}\n")),
                    }
                }
            }
            (None, other) => out.push_str(&format!("{pad}{k}: {other}\n")),
        }
    }
}
