//! Deterministic report serialization: sorted keys, floats with 15
//! significant digits and lowercase exponents, non-finite values as `null`.

use serde::Serialize;
use serde_json::{Map, Number, Value};

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

pub fn fmt_float(x: f64) -> String {
    format!("{x:.14e}")
}

fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => match n.as_f64() {
            Some(x) if x.is_finite() => Value::Number(Number::from_string_unchecked(fmt_float(x))),
            _ => Value::Null,
        },
        Value::Array(a) => Value::Array(a.into_iter().map(normalize).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, normalize(v))).collect::<Map<_, _>>()),
        other => other,
    }
}

pub fn to_value<T: Serialize>(t: &T) -> Result<Value> {
    Ok(normalize(serde_json::to_value(t)?))
}

pub fn to_json<T: Serialize>(t: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(&to_value(t)?)? + "\n")
}

/// `(path, value)` pairs of every leaf, paths dotted, array indices numeric.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, x)| walk(&join(k), x, out)),
            Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| walk(&join(&i.to_string()), x, out)),
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    walk("", v, &mut out);
    out
}

pub fn to_csv(v: &Value) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["field", "value"]).map_err(csv_err)?;
    for (k, x) in flatten(v) {
        w.write_record([k, x]).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| crate::GaborError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn csv_err(e: csv::Error) -> crate::GaborError {
    crate::GaborError::Io(std::io::Error::other(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_have_fifteen_digits() {
        assert_eq!(fmt_float(1.0), "1.00000000000000e0");
        assert_eq!(fmt_float(-2.5e-11), "-2.50000000000000e-11");
        let v = to_value(&json!({"b": 0.1, "a": [1, f64::NAN], "c": 3})).unwrap();
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"a":[1,null],"b":1.00000000000000e-1,"c":3}"#
        );
    }

    #[test]
    fn csv_lists_every_leaf() {
        let v = to_value(&json!({"x": {"y": [1.5, true]}, "s": "t"})).unwrap();
        let csv = to_csv(&v).unwrap();
        assert_eq!(csv, "field,value\ns,t\nx.y.0,1.50000000000000e0\nx.y.1,true\n");
    }
}
