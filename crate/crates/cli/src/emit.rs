//! JSON and CSV emitters. Every double is printed with 17 significant digits
//! in both formats, so the two agree character for character.

use std::io::Write;
use std::path::Path;

use focklab_core::matrix::fmt_f64;
use serde_json::{Number, Value};

pub const SCHEMA: &str = "focklab/1";

/// Rewrites every floating-point number in `v` to its 17-digit form.
pub fn fixed_digits(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            match serde_json::from_str::<Number>(&fmt_f64(x)) {
                Ok(num) => Value::Number(num),
                Err(_) => Value::Null,
            }
        }
        Value::Array(a) => Value::Array(a.into_iter().map(fixed_digits).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, fixed_digits(v))).collect()),
        other => other,
    }
}

pub fn json_text(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&fixed_digits(v)).expect("serializing a Value cannot fail");
    s.push('\n');
    s
}

/// A CSV table: header plus rows of already formatted cells.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn text(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("cells are UTF-8")
    }
}

/// Cell text for a JSON value: numbers in 17-digit form, strings bare,
/// anything structured as compact JSON.
pub fn cell(v: &Value) -> String {
    match fixed_digits(v.clone()) {
        Value::String(s) => s,
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// A double exactly as it appears in the JSON output.
pub fn num(x: f64) -> String {
    cell(&Value::from(x))
}

/// Writes to `out`, or to standard output when absent.
pub fn write_output(out: Option<&Path>, text: &str) -> Result<(), focklab_core::FockError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| focklab_core::FockError::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())
                .and_then(|_| so.flush())
                .map_err(|e| focklab_core::FockError::Io {
                    path: "<stdout>".into(),
                    message: e.to_string(),
                })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_get_seventeen_digits() {
        let v = fixed_digits(json!({ "a": 0.1, "b": [1, 2.5], "c": "x", "d": -0.0 }));
        let s = v.to_string();
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        assert!(s.contains("2.5000000000000000e+0"), "{s}");
        assert!(s.contains("[1,"), "{s}");
        assert_eq!(v["a"].as_f64(), Some(0.1));
        assert_eq!(num(2.5), "2.5000000000000000e+0");
        assert_eq!(num(0.0), "0");
    }

    #[test]
    fn csv_quotes_structured_cells() {
        let mut t = Table::new(&["id", "measured"]);
        t.push(vec!["x".into(), cell(&json!({ "k": 1.0 }))]);
        let text = t.text();
        assert!(text.starts_with("id,measured\n"));
        assert!(text.contains("\"{\"\"k\"\":1.0000000000000000e+0}\""), "{text}");
    }
}
