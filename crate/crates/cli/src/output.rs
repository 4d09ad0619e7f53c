//! Deterministic rendering: every float goes out with 12 significant digits.

use serde::Serialize;
use serde_json::Value;

pub const SIG_DIGITS: usize = 12;

/// `x` rounded to [`SIG_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().expect("valid float")
}

pub fn fmt_float(x: f64) -> String {
    round_sig(x).to_string()
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            if let Some(x) = n.as_f64() {
                if let Some(r) = serde_json::Number::from_f64(round_sig(x)) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("serializable");
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = ::csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt_float(1.133152427349485), "1.13315242735");
        assert_eq!(fmt_float(125905.82526105388), "125905.825261");
        assert_eq!(fmt_float(0.0), "0");
        assert_eq!(fmt_float(-2.5e-7), "-0.00000025");
    }

    #[test]
    fn json_floats_rounded() {
        let s = json(&serde_json::json!({"x": 1.207518749639422, "n": 3, "v": [0.1, 2.0]}));
        assert!(s.contains("1.20751874964"), "{s}");
        assert!(s.contains("\"n\": 3"));
    }
}
