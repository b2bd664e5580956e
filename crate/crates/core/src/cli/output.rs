//! Output records and their JSON Lines / CSV renderings.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), so every value
//! parses back to the same `f64`; non-finite values become the strings
//! `"inf"`, `"-inf"`, `"nan"`.

use std::collections::BTreeMap;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};

use crate::trig::EvalConfig;

/// One line of output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub results: BTreeMap<String, Value>,
    pub config: EvalConfig,
    pub timestamp: String,
}

/// A float as a JSON value with 17 significant digits.
pub fn float(x: f64) -> Value {
    if x.is_finite() {
        let text = format!("{x:.16e}");
        Value::Number(Number::from_str(&text).expect("formatted float is a JSON number"))
    } else if x.is_nan() {
        Value::String("nan".into())
    } else if x > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

pub fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().copied().map(float).collect())
}

pub fn opt_float(x: Option<f64>) -> Value {
    x.map_or(Value::Null, float)
}

/// Builder for the `params` / `results` maps.
#[derive(Debug, Default, Clone)]
pub struct Fields(BTreeMap<String, Value>);

impl Fields {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn f(mut self, key: &str, x: f64) -> Self {
        self.0.insert(key.into(), float(x));
        self
    }

    pub fn v(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.0.insert(key.into(), v.into());
        self
    }

    pub fn into_map(self) -> BTreeMap<String, Value> {
        self.0
    }
}

/// Records of one invocation plus the CSV column order. Columns are looked
/// up in `params` first, then `results`.
#[derive(Debug, Clone)]
pub struct Emission {
    pub records: Vec<OutputRecord>,
    pub columns: Vec<String>,
}

fn csv_cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(Value::Array(items)) => items
            .iter()
            .map(|item| csv_cell(Some(item)))
            .collect::<Vec<_>>()
            .join(";"),
        Some(other) => other.to_string(),
    }
}

pub fn write_json_lines<W: Write>(out: &mut W, emission: &Emission) -> std::io::Result<()> {
    for record in &emission.records {
        serde_json::to_writer(&mut *out, record)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_csv<W: Write>(out: W, emission: &Emission) -> csv::Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer.write_record(&emission.columns)?;
    for record in &emission.records {
        let row = emission
            .columns
            .iter()
            .map(|c| csv_cell(record.params.get(c).or_else(|| record.results.get(c))));
        writer.write_record(row)?;
    }
    writer.flush()?;
    Ok(())
}
