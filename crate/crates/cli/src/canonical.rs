//! Byte-stable JSON: keys sorted, every float written with 17 significant
//! digits so that parsing the output recovers the same `f64`.

use serde_json::Value;
use sha2::{Digest, Sha256};

pub fn to_string(v: &Value) -> String {
    let mut out = String::new();
    write(v, &mut out);
    out
}

/// Hex SHA-256 of the canonical form.
pub fn digest(v: &Value) -> String {
    hex::encode(Sha256::digest(to_string(v).as_bytes()))
}

pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn write(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else {
                out.push_str(&float(n.as_f64().expect("JSON number")));
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut entries: Vec<_> = map.iter().collect();
            entries.sort_by(|a, b| a.0.cmp(b.0));
            out.push('{');
            for (i, (k, item)) in entries.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write(item, out);
            }
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_are_sorted_and_floats_fixed() {
        let v = json!({"b": 0.1, "a": [1, -2, true, null], "c": "x\"y"});
        assert_eq!(to_string(&v), r#"{"a":[1,-2,true,null],"b":1.0000000000000001e-1,"c":"x\"y"}"#);
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE, 1.0 - f64::EPSILON] {
            let back: f64 = serde_json::from_str(&float(x)).unwrap();
            assert_eq!(back.to_bits(), x.to_bits());
        }
    }

    #[test]
    fn reparse_is_a_fixed_point() {
        let v = json!({"p": [0.6, 0.8], "q": {"z": 1e-17, "y": 3}});
        let once = to_string(&v);
        let twice = to_string(&serde_json::from_str(&once).unwrap());
        assert_eq!(once, twice);
        assert_eq!(digest(&v).len(), 64);
    }
}
