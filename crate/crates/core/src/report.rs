//! Shared serialization helpers for emitted reports.

use serde_json::Value;

/// Rounds to 12 significant digits so that reports do not carry
/// platform-dependent trailing noise.
pub fn sig12(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    serde_json::Number::from_f64(rounded)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON value serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(1.0 / 3.0).to_string(), "0.333333333333");
        assert_eq!(sig12(3.5).to_string(), "3.5");
        assert_eq!(sig12(2.0f64.sqrt() * 1e-7).to_string(), "1.41421356237e-7");
        assert_eq!(sig12(f64::NAN), Value::Null);
    }
}
