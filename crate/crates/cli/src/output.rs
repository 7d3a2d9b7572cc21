use epochscope_core::format::sig;
use serde_json::{json, Map, Value};

use crate::args::Format;

pub struct Artifact {
    pub file: String,
    pub content: String,
}

pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders with the config hash as header: a `#` line for delimited text,
/// a field for JSON.
pub struct Renderer<'a> {
    pub hash: &'a str,
    pub precision: usize,
    pub format: Option<Format>,
}

impl Renderer<'_> {
    pub fn num(&self, x: f64) -> String {
        sig(x, self.precision)
    }

    fn header(&self) -> String {
        format!("# config_hash={}\n", self.hash)
    }

    /// A table in the requested format, `default` otherwise.
    pub fn table(&self, stem: &str, default: Format, t: &Table) -> Artifact {
        let format = self.format.unwrap_or(default);
        let content = match format {
            Format::Tsv | Format::Csv => {
                let line = |fields: &[String]| -> String {
                    if format == Format::Tsv {
                        fields.join("\t")
                    } else {
                        fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",")
                    }
                };
                let mut out = self.header();
                out.push_str(&line(&t.columns));
                out.push('\n');
                for row in &t.rows {
                    out.push_str(&line(row));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let doc = json!({
                    "config_hash": self.hash,
                    "columns": t.columns,
                    "rows": t.rows,
                });
                pretty(&doc)
            }
        };
        Artifact {
            file: format!("{stem}.{}", format.extension()),
            content,
        }
    }

    /// A JSON document; floating-point values are rounded to the configured
    /// significant digits.
    pub fn json(&self, stem: &str, data: Value) -> Artifact {
        let mut doc = Map::new();
        doc.insert("config_hash".into(), Value::String(self.hash.to_string()));
        doc.insert("data".into(), self.round(data));
        Artifact {
            file: format!("{stem}.json"),
            content: pretty(&Value::Object(doc)),
        }
    }

    pub fn text(&self, stem: &str, body: &str) -> Artifact {
        Artifact {
            file: format!("{stem}.txt"),
            content: format!("{}{body}", self.header()),
        }
    }

    fn round(&self, v: Value) -> Value {
        match v {
            Value::Number(n) if n.is_f64() => {
                let x = n.as_f64().unwrap_or(f64::NAN);
                sig(x, self.precision)
                    .parse::<f64>()
                    .ok()
                    .and_then(serde_json::Number::from_f64)
                    .map_or(Value::Null, Value::Number)
            }
            Value::Array(a) => Value::Array(a.into_iter().map(|x| self.round(x)).collect()),
            Value::Object(o) => Value::Object(o.into_iter().map(|(k, x)| (k, self.round(x))).collect()),
            other => other,
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}
