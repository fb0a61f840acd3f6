//! Serialization helpers for reports.

use qpkit::koszul::GlIndex;
use qpkit::ratlin::Rational;
use serde_json::{json, Value};

/// Largest integer a JSON number carries exactly in double precision.
const SAFE_INTEGER: u64 = 1 << 53;

/// A count as a JSON number when it is exactly representable, else a string.
pub fn count(v: impl Into<u64>) -> Value {
    let v = v.into();
    if v < SAFE_INTEGER {
        json!(v)
    } else {
        json!(v.to_string())
    }
}

pub fn counts(vs: &[usize]) -> Value {
    Value::Array(vs.iter().map(|&v| count(v as u64)).collect())
}

/// A rational as `"p/q"`, or `"p"` when integral.
pub fn rational(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn point(p: &[Rational]) -> Value {
    Value::Array(p.iter().map(rational).collect())
}

pub fn gl_index(g: GlIndex) -> Value {
    match g {
        GlIndex::Finite(j) => count(j as u64),
        GlIndex::Infinite => json!("inf"),
    }
}
