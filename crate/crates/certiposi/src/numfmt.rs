//! Float presentation in JSON reports: 17 significant digits, non-finite values as strings.

use serde::Serializer;
use serde_json::{Number, Value};

fn number(x: f64) -> Value {
    if x.is_finite() {
        // arbitrary_precision keeps the digits exactly as written.
        serde_json::from_str::<Number>(&format!("{x:.16e}")).map(Value::Number).unwrap_or(Value::Null)
    } else if x.is_nan() {
        Value::String("nan".into())
    } else if x > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

/// Serializes ±∞ and NaN as "inf", "-inf", "nan" instead of null.
pub fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_str(if x.is_nan() { "nan" } else if *x > 0.0 { "inf" } else { "-inf" })
    }
}

pub fn ser_opt_f64<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => ser_f64(v, s),
        None => s.serialize_none(),
    }
}

/// Rewrites every float in a JSON tree with 17 significant digits; integers are kept.
pub fn canonical_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => n.as_f64().map(number).unwrap_or(Value::Number(n)),
        Value::Array(a) => Value::Array(a.into_iter().map(canonical_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, canonical_floats(v))).collect()),
        other => other,
    }
}

/// Reads a float written by [`ser_f64`].
pub fn read_f64(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => match s.as_str() {
            "inf" => Some(f64::INFINITY),
            "-inf" => Some(f64::NEG_INFINITY),
            "nan" => Some(f64::NAN),
            _ => None,
        },
        _ => None,
    }
}
