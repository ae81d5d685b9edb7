use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::CliError;

pub const SCHEMA: &str = "horolab.report/v1";
pub const FLOAT_FORMAT: &str = "shortest round-trip decimal";

/// Rows for CSV output with a fixed column order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", self.header.join(","))?;
        for r in &self.rows {
            writeln!(w, "{}", r.join(","))?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii table")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub phase: String,
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub result: Value,
    pub table: Table,
    pub timings: Vec<Timing>,
}

impl RunReport {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema".into(), SCHEMA.into());
        m.insert("command".into(), self.command.clone().into());
        m.insert("float_format".into(), FLOAT_FORMAT.into());
        m.insert("config".into(), serde_json::to_value(&self.config).expect("string map"));
        m.insert("result".into(), floats_as_strings(self.result.clone()));
        m.insert(
            "timings".into(),
            floats_as_strings(serde_json::to_value(&self.timings).expect("timings")),
        );
        Value::Object(m)
    }

    pub fn to_json_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json");
        s.push('\n');
        s
    }
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialise")
}

/// Replaces non-integer JSON numbers by their shortest round-trip decimal strings.
pub fn floats_as_strings(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => Value::String(fmt_f64(n.as_f64().unwrap_or(f64::NAN))),
        Value::Array(a) => Value::Array(a.into_iter().map(floats_as_strings).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, floats_as_strings(v))).collect()),
        other => other,
    }
}

/// Locale-independent float formatting, `NaN`/`inf` spelled out.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:?}")
    }
}

pub fn write_file(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path.display().to_string(), e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_become_strings() {
        let v = floats_as_strings(json!({"a": 1, "b": 0.1, "c": [2.5, -3], "d": "x"}));
        assert_eq!(v, json!({"a": 1, "b": "0.1", "c": ["2.5", -3], "d": "x"}));
        assert_eq!(fmt_f64(1e-20), "1e-20");
        assert_eq!(fmt_f64(2.0), "2.0");
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new(&["n", "x", "y", "theta", "f"]);
        assert_eq!(t.to_text(), "n,x,y,theta,f\n");
    }
}
