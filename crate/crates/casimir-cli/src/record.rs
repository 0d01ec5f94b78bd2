//! Result records: versioned JSON with explicit units, or CSV with the
//! independent variable first, then the value, then its error estimate.

use serde_json::{json, Map, Value};
use std::fmt::Write as _;

pub const SCHEMA: u32 = 1;

pub fn quantity(value: f64, unit: &str) -> Value {
    json!({ "value": value, "unit": unit })
}

#[derive(Debug, Clone)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: &str, unit: &str) -> Self {
        Column { name: name.into(), unit: unit.into() }
    }
}

/// Rows of (independent variable, value, error).
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: [Column; 3],
    pub rows: Vec<[f64; 3]>,
}

#[derive(Debug, Clone)]
pub struct Record {
    pub command: String,
    pub method: String,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    /// (value, error, unit) for the CSV rendering of scalar results.
    pub scalars: Vec<(String, f64, f64, String)>,
    pub mesh: Option<Value>,
    pub table: Option<Table>,
    pub warnings: Vec<String>,
}

impl Record {
    pub fn new(command: &str, method: &str) -> Self {
        Record {
            command: command.into(),
            method: method.into(),
            inputs: Map::new(),
            outputs: Map::new(),
            scalars: Vec::new(),
            mesh: None,
            table: None,
            warnings: Vec::new(),
        }
    }

    pub fn input(&mut self, name: &str, value: f64, unit: &str) {
        self.inputs.insert(name.into(), quantity(value, unit));
    }

    pub fn input_text(&mut self, name: &str, value: &str) {
        self.inputs.insert(name.into(), Value::String(value.into()));
    }

    pub fn output(&mut self, name: &str, value: f64, unit: &str) {
        self.output_with_error(name, value, 0.0, unit);
    }

    pub fn output_with_error(&mut self, name: &str, value: f64, error: f64, unit: &str) {
        self.outputs.insert(name.into(), json!({ "value": value, "error": error, "unit": unit }));
        self.scalars.push((name.into(), value, error, unit.into()));
    }

    pub fn output_value(&mut self, name: &str, value: Value) {
        self.outputs.insert(name.into(), value);
    }

    pub fn to_json(&self) -> String {
        let mut root = Map::new();
        root.insert("schema".into(), json!(SCHEMA));
        root.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        root.insert("command".into(), json!(self.command));
        root.insert("method".into(), json!(self.method));
        root.insert("inputs".into(), Value::Object(self.inputs.clone()));
        root.insert("outputs".into(), Value::Object(self.outputs.clone()));
        if let Some(m) = &self.mesh {
            root.insert("mesh".into(), m.clone());
        }
        if let Some(t) = &self.table {
            let cols: Vec<Value> = t.columns.iter().map(|c| json!({ "name": c.name, "unit": c.unit })).collect();
            root.insert("table".into(), json!({ "columns": cols, "rows": t.rows }));
        }
        root.insert("warnings".into(), json!(self.warnings));
        let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("record serialises");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        match &self.table {
            Some(t) => {
                let head: Vec<String> = t.columns.iter().map(|c| format!("{} [{}]", c.name, c.unit)).collect();
                let _ = writeln!(s, "{}", head.join(","));
                for r in &t.rows {
                    let _ = writeln!(s, "{:e},{:e},{:e}", r[0], r[1], r[2]);
                }
            }
            None => {
                let _ = writeln!(s, "quantity,value,error,unit");
                for (name, v, e, u) in &self.scalars {
                    let _ = writeln!(s, "{name},{v:e},{e:e},{u}");
                }
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_carries_schema_and_units() {
        let mut r = Record::new("plates", "exact");
        r.input("gap", 1e-6, "m");
        r.output("pressure", -1.3e-3, "Pa");
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["outputs"]["pressure"]["unit"], "Pa");
        assert_eq!(v["inputs"]["gap"]["unit"], "m");
    }

    #[test]
    fn csv_column_order() {
        let mut r = Record::new("sweep", "exact");
        r.table = Some(Table {
            columns: [Column::new("gap", "m"), Column::new("pressure", "Pa"), Column::new("error", "Pa")],
            rows: vec![[1e-6, -1.3e-3, 0.0]],
        });
        let csv = r.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("gap [m],pressure [Pa],error [Pa]"));
        assert_eq!(lines.next(), Some("1e-6,-1.3e-3,0e0"));
    }
}
