//! Serialization conventions: rationals as `"p/q"`, complex values as
//! `{re, im}`, floats rounded to a fixed number of significant digits.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use hciz_core::scalar::{format_rational, Complex64, GaussianRational};
use hciz_core::Partition;
use num::BigRational;
use serde_json::{json, Value};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] so reruns print identical JSON.
pub fn round(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap()
}

pub fn rational(q: &BigRational) -> Value {
    Value::String(format_rational(q))
}

pub fn complex(z: Complex64) -> Value {
    json!({ "re": round(z.re), "im": round(z.im) })
}

pub fn gaussian(z: &GaussianRational) -> Value {
    json!({ "re": format_rational(&z.re), "im": format_rational(&z.im) })
}

pub fn partition(p: &Partition) -> Value {
    json!(p.parts())
}

/// Writes `text` to `path` or stdout.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                out.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

pub fn emit_json(value: &Value, path: Option<&Path>) -> Result<()> {
    emit(&serde_json::to_string_pretty(value)?, path)
}

/// CSV from a header and string rows.
pub fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use hciz_core::scalar::ratio;

    #[test]
    fn fixed_precision() {
        assert_eq!(round(0.1 + 0.2), 0.3);
        assert_eq!(round(1.0 / 3.0).to_string(), "0.333333333333");
        assert_eq!(rational(&ratio(-2, 4)), Value::String("-1/2".into()));
        assert_eq!(complex(Complex64::new(1.0, -0.5)), json!({"re": 1.0, "im": -0.5}));
    }

    #[test]
    fn csv_quoting() {
        let t = csv_text(&["alpha", "value"], &[vec!["[2,1]".into(), "3".into()]]).unwrap();
        assert_eq!(t, "alpha,value\n\"[2,1]\",3\n");
    }
}
