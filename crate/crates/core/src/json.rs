//! Canonical JSON output: keys sorted, floats with 17 significant digits,
//! complex numbers as `{re, im}` objects.

use std::io;

use num_complex::Complex64 as C64;
use serde_json::ser::Formatter;
use serde_json::{json, Value};

/// Compact formatter that prints every float in `{:.16e}` form so that
/// output is byte-stable across platforms and round-trips exactly.
#[derive(Clone, Copy, Debug, Default)]
pub struct CanonicalFormatter;

impl Formatter for CanonicalFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serializes a value canonically. `serde_json::Map` is ordered, so object
/// keys come out sorted.
pub fn to_canonical_string(value: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, CanonicalFormatter);
    serde::Serialize::serialize(value, &mut ser).expect("in-memory serialization");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

pub fn complex_to_value(z: C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn complex_list(zs: &[C64]) -> Value {
    Value::Array(zs.iter().map(|&z| complex_to_value(z)).collect())
}

/// Accepts `{re, im}` objects (either key may be omitted) or plain numbers.
pub fn complex_from_value(v: &Value) -> Option<C64> {
    match v {
        Value::Number(n) => n.as_f64().map(|re| C64::new(re, 0.0)),
        Value::Object(map) => {
            if map.keys().any(|k| k != "re" && k != "im") {
                return None;
            }
            let part = |key: &str| match map.get(key) {
                None => Some(0.0),
                Some(x) => x.as_f64(),
            };
            Some(C64::new(part("re")?, part("im")?))
        }
        _ => None,
    }
}
