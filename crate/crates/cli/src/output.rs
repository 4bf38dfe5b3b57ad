//! Stable serialization: CSV with RFC-4180 quoting and `\n` terminators, and
//! a JSON envelope mirroring the same field names. All floating-point values
//! are rendered with 17 significant digits so doubles round-trip losslessly.

use serde_json::{Map, Number, Value};

/// 17-significant-digit rendering (scientific form `d.dddddddddddddddde±k`).
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// RFC-4180 field quoting: fields containing commas, quotes, or line breaks
/// are wrapped in double quotes with inner quotes doubled. Numeric output
/// never triggers this; it guards free-form text fields.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A CSV document under construction: header plus rows, `\n`-terminated.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Csv {
        let mut buf = String::new();
        push_row(&mut buf, header.iter().map(|s| s.to_string()));
        Csv { buf }
    }

    pub fn row<I: IntoIterator<Item = String>>(&mut self, fields: I) {
        push_row(&mut self.buf, fields.into_iter());
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

fn push_row(buf: &mut String, fields: impl Iterator<Item = String>) {
    let mut first = true;
    for f in fields {
        if !first {
            buf.push(',');
        }
        buf.push_str(&csv_field(&f));
        first = false;
    }
    buf.push('\n');
}

/// JSON number carrying exactly the 17-significant-digit decimal form.
/// (Uses the arbitrary-precision representation, so the digits printed are
/// the digits stored — no shortest-round-trip rewriting.)
pub fn json_f64(v: f64) -> Value {
    Value::Number(Number::from_string_unchecked(fmt_f64(v)))
}

pub fn json_u64(v: u64) -> Value {
    Value::Number(Number::from(v))
}

pub fn json_i64(v: i64) -> Value {
    Value::Number(Number::from(v))
}

/// The versioned envelope wrapping every JSON emission:
/// `{schema_version, command, parameters, payload}`.
pub fn envelope(command: &str, parameters: Map<String, Value>, payload: Value) -> String {
    let mut root = Map::new();
    root.insert("schema_version".into(), Value::String("1".into()));
    root.insert("command".into(), Value::String(command.into()));
    root.insert("parameters".into(), Value::Object(parameters));
    root.insert("payload".into(), payload);
    let mut out = serde_json::to_string_pretty(&Value::Object(root))
        .expect("envelope serialization cannot fail");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_has_17_significant_digits() {
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt_f64(-1.0), "-1.0000000000000000e0");
        // Round trip is exact.
        for v in [0.1, std::f64::consts::PI, 1e-300, -3.25e200] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn csv_quoting_follows_rfc_4180() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
        assert_eq!(csv_field("two\nlines"), "\"two\nlines\"");
    }

    #[test]
    fn json_numbers_keep_the_printed_digits() {
        let v = json_f64(0.1);
        assert_eq!(serde_json::to_string(&v).unwrap(), "1.0000000000000001e-1");
    }
}
