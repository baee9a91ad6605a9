//! Byte-stable report output: floats at six significant digits, sorted keys.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

pub const SIGNIFICANT_DIGITS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Json,
    Csv,
    Text,
}

impl Emit {
    pub fn extension(self) -> &'static str {
        match self {
            Emit::Json => "json",
            Emit::Csv => "csv",
            Emit::Text => "txt",
        }
    }
}

impl fmt::Display for Emit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Emit::Json => "json",
            Emit::Csv => "csv",
            Emit::Text => "text",
        })
    }
}

impl FromStr for Emit {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(Emit::Json),
            "csv" => Ok(Emit::Csv),
            "text" | "txt" => Ok(Emit::Text),
            _ => Err(Error::InvalidParameter(format!("unknown output format `{s}`"))),
        }
    }
}

/// Round to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Fixed textual form of a float for CSV and text output.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    let r = round_sig(x);
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(0.0);
            serde_json::Number::from_f64(round_sig(x)).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(normalize).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, normalize(v))).collect::<Map<_, _>>()),
        other => other,
    }
}

/// Serialize to a JSON value with rounded floats; object keys are sorted.
pub fn to_value<T: Serialize + ?Sized>(x: &T) -> Result<Value> {
    Ok(normalize(serde_json::to_value(x)?))
}

pub fn to_json_string<T: Serialize + ?Sized>(x: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&to_value(x)?)?;
    s.push('\n');
    Ok(s)
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => fmt_float(x),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        _ => unreachable!("flattened"),
    }
}

/// Leaf values keyed by dotted paths, in sorted key order; array elements use their index.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let join = |k: &str| {
            if prefix.is_empty() {
                k.to_string()
            } else {
                format!("{prefix}.{k}")
            }
        };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, v)| walk(&join(k), v, out)),
            Value::Array(a) => a.iter().enumerate().for_each(|(i, v)| walk(&join(&i.to_string()), v, out)),
            leaf => out.push((prefix.to_string(), scalar(leaf))),
        }
    }
    let mut out = Vec::new();
    walk("", v, &mut out);
    out
}

/// Write a report in the requested format. CSV and text are `key,value` flattenings.
pub fn write_report<T: Serialize + ?Sized, W: Write>(x: &T, emit: Emit, mut w: W) -> Result<()> {
    let io = |e| Error::io("<report>", e);
    match emit {
        Emit::Json => w.write_all(to_json_string(x)?.as_bytes()).map_err(io),
        Emit::Csv => {
            let mut c = csv::Writer::from_writer(w);
            c.write_record(["key", "value"])?;
            for (k, v) in flatten(&to_value(x)?) {
                c.write_record([k, v])?;
            }
            c.flush().map_err(io)
        }
        Emit::Text => {
            let rows = flatten(&to_value(x)?);
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in rows {
                writeln!(w, "{k:<width$}  {v}").map_err(io)?;
            }
            Ok(())
        }
    }
}
