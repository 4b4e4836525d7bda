use serde::Serialize;
use serde_json::{Number, Value};

/// Round to `digits` significant digits.
pub fn sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

fn round_value(v: Value, digits: usize) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = sig(n.as_f64().unwrap_or(f64::NAN), digits);
            Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(|x| round_value(x, digits)).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, x)| (k, round_value(x, digits))).collect()),
        other => other,
    }
}

/// Pretty JSON with every float at 15 significant digits.
pub fn json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("output types serialize");
    serde_json::to_string_pretty(&round_value(v, 15)).expect("values serialize")
}

/// Shortest text of `x`, in exponent form outside `[1e-4, 1e15)`.
fn text(x: f64) -> String {
    let m = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&m) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// A float for plain output, 10 significant digits.
pub fn plain(x: f64) -> String {
    text(sig(x, 10))
}

pub fn opt_plain(x: Option<f64>) -> String {
    x.map(plain).unwrap_or_default()
}

/// A float for CSV cells, 15 significant digits.
pub fn cell(x: f64) -> String {
    text(sig(x, 15))
}

pub fn opt_cell(x: Option<f64>) -> String {
    x.map(cell).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(plain(1.2024127788478864), "1.202412779");
        assert_eq!(sig(0.0, 15), 0.0);
        assert_eq!(cell(1.0 / 3.0), "0.333333333333333");
        assert_eq!(cell(-2.7755575615628914e-17), "-2.77555756156289e-17");
        assert_eq!(plain(1e20), "1e20");
        let s = json(&serde_json::json!({"x": 1.2024127788478864, "n": 3}));
        assert!(s.contains("1.20241277884789"));
        assert!(s.contains("\"n\": 3"));
    }
}
