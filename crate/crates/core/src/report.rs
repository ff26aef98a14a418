//! Float formatting shared by every serialized report.

use serde::Serializer;
use serde_json::{Number, Value};

/// `x` with 17 significant digits in scientific notation, e.g.
/// `1.7500000000000000e0`.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON number carrying exactly the [`sig17`] digits; non-finite values become
/// strings.
pub fn float_value(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(x.to_string());
    }
    match sig17(x).parse::<Number>() {
        Ok(n) => Value::Number(n),
        Err(_) => Value::String(sig17(x)),
    }
}

/// `serialize_with` adapter for `f64` fields.
pub fn serialize_f64<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&float_value(*x), s)
}
