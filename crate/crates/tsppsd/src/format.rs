//! Output encodings: JSON with exact numbers as `"p/q"` strings, and CSV.

use std::io::Write;

use num_bigint::BigUint;
use serde_json::{json, Map, Value};
use tsppsd_core::moment::MomentMatrix;
use tsppsd_core::psd::{CertificatePolynomial, PsdVerdict};
use tsppsd_core::rational::to_pq;
use tsppsd_core::Rational;

use crate::error::{CliError, CliResult};

pub fn pq(r: &Rational) -> Value {
    Value::String(to_pq(r))
}

pub fn pq_int(v: &BigUint) -> Value {
    Value::String(format!("{v}/1"))
}

pub fn pq_vec(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(pq).collect())
}

/// Finite floats as numbers, anything else as `null`.
pub fn float(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

pub fn matrix_json(m: &MomentMatrix) -> Value {
    let mut obj = Map::new();
    match m.space {
        tsppsd_core::moment::Space::Edges { n } => obj.insert("n".into(), json!(n)),
        tsppsd_core::moment::Space::Coordinates { d } => obj.insert("d".into(), json!(d)),
    };
    obj.insert("k".into(), json!(m.k));
    obj.insert("basis".into(), json!(m.labels()));
    let rows: Vec<Value> = m.entries.rows().map(pq_vec).collect();
    obj.insert("entries".into(), Value::Array(rows));
    Value::Object(obj)
}

pub fn matrix_csv(m: &MomentMatrix) -> String {
    let labels = m.labels();
    let mut out = String::from("basis");
    for l in &labels {
        out.push(',');
        out.push_str(l);
    }
    out.push('\n');
    for (l, row) in labels.iter().zip(m.entries.rows()) {
        out.push_str(l);
        for x in row {
            out.push(',');
            out.push_str(&to_pq(x));
        }
        out.push('\n');
    }
    out
}

pub fn verdict_json(v: &PsdVerdict) -> Value {
    let mut obj = Map::new();
    obj.insert("status".into(), json!(v.status.name()));
    obj.insert(
        "method".into(),
        json!(match v.method {
            tsppsd_core::psd::Method::Exact => "exact",
            tsppsd_core::psd::Method::Float => "float",
        }),
    );
    if let Some(r) = v.rank {
        obj.insert("rank".into(), json!(r));
    }
    if let Some(x) = v.min_eigenvalue {
        obj.insert("min_eigenvalue".into(), float(x));
    }
    if let Some(t) = v.tolerance {
        obj.insert("tolerance".into(), float(t));
    }
    if let Some(w) = &v.witness {
        obj.insert("witness".into(), pq_vec(w));
    }
    if let Some(w) = &v.witness_value {
        obj.insert("witness_value".into(), pq(w));
    }
    Value::Object(obj)
}

pub fn certificate_json(p: &CertificatePolynomial) -> Value {
    json!({
        "kind": p.kind().name(),
        "polynomial": p.label(),
        "degree": p.degree(),
    })
}

/// Pretty JSON followed by a newline.
pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Writes to a file, or to standard output for `-`.
pub fn write_output(path: &str, content: &str) -> CliResult<()> {
    let io = |source| CliError::Io {
        path: path.to_string(),
        source,
    };
    if path == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(content.as_bytes()).map_err(io)?;
        out.flush().map_err(io)
    } else {
        std::fs::write(path, content).map_err(io)
    }
}

/// `rational + irrational·√radicand` with exact parts.
pub fn surd_json(s: &tsppsd_core::spectra::Surd) -> Value {
    if s.is_rational() {
        return pq(&s.rational);
    }
    json!({
        "rational": pq(&s.rational),
        "irrational": pq(&s.irrational),
        "radicand": s.radicand,
    })
}
