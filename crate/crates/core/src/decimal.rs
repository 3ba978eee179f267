//! Fixed-significance decimal rendering for index values in JSON documents.
//!
//! Values are written with the shortest digit string that round-trips to the
//! same `f64`, padded with trailing zeros to at least [`MIN_SIGNIFICANT`]
//! significant digits. Parsing the text back always yields the original bits.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

pub const MIN_SIGNIFICANT: usize = 9;

/// Renders a finite `f64` as positional decimal text.
pub fn format_decimal(value: f64) -> String {
    assert!(value.is_finite(), "cannot render non-finite value {value}");
    if value == 0.0 {
        return format!("0.{}", "0".repeat(MIN_SIGNIFICANT));
    }
    let sci = format!("{:e}", value.abs());
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    let mut digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    while digits.len() < MIN_SIGNIFICANT {
        digits.push('0');
    }

    let mut out = String::new();
    if value < 0.0 {
        out.push('-');
    }
    if exp < 0 {
        out.push_str("0.");
        out.push_str(&"0".repeat((-exp - 1) as usize));
        out.push_str(&digits);
    } else {
        let int_len = exp as usize + 1;
        if digits.len() <= int_len {
            out.push_str(&digits);
            out.push_str(&"0".repeat(int_len - digits.len()));
            out.push_str(".0");
        } else {
            out.push_str(&digits[..int_len]);
            out.push('.');
            out.push_str(&digits[int_len..]);
        }
    }
    out
}

pub(crate) fn raw(value: f64) -> Box<RawValue> {
    RawValue::from_string(format_decimal(value)).expect("decimal text is valid JSON")
}

/// `serialize_with` adapter for plain `f64` fields.
pub fn serialize<S: Serializer>(value: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    if !value.is_finite() {
        return Err(serde::ser::Error::custom("non-finite index value"));
    }
    raw(*value).serialize(serializer)
}

pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<f64, D::Error> {
    f64::deserialize(deserializer)
}
