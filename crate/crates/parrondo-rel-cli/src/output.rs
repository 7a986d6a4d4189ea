//! Report serialization: JSON with full-fidelity floats, RFC-4180-style CSV.

use std::io;

use serde::Serialize;

/// serde_json formatter that prints every finite f64 with 17 significant
/// digits in scientific notation, enough to round-trip the exact bit
/// pattern. Non-finite values are serialized as null by serde_json before
/// this formatter is consulted.
struct SigDigits17;

impl serde_json::ser::Formatter for SigDigits17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

pub fn to_json(value: &impl Serialize) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits17);
    value
        .serialize(&mut ser)
        .expect("report serialization cannot fail");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

/// 17-significant-digit rendering for CSV cells, matching the JSON output.
pub fn fmt_f64(value: f64) -> String {
    if value.is_finite() {
        format!("{value:.16e}")
    } else {
        String::new()
    }
}

/// Quotes a CSV field when it contains a comma, quote or line break,
/// doubling internal quotes.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
