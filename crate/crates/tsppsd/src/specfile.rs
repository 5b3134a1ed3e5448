//! Functional specification files.
//!
//! ```json
//! {"kind":"subtour","n":8,"U":[1,2,3]}
//! {"kind":"edge-upper","n":6,"edge":"1-2"}
//! {"kind":"two-matching","n":7,"U":[1,2,3],"F":["1-4","2-5","3-6"]}
//! {"kind":"explicit","n":6,"constant":"-5/4","coeffs":{"1-4":"5/8"}}
//! {"kind":"combination","terms":[{"scale":"3/1","func":{...}},{"scale":"-2/1","func":{...}}]}
//! ```

use std::path::Path;

use serde_json::{json, Map, Value};
use tsppsd_core::cycles::{Edge, Vertex};
use tsppsd_core::functionals::{FacetSpec, LinearFunctional};
use tsppsd_core::rational::{parse, to_pq};
use tsppsd_core::Rational;

use crate::error::{CliError, CliResult};

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Spec(msg.into())
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> CliResult<&'a Value> {
    obj.get(key).ok_or_else(|| bad(format!("missing field \"{key}\"")))
}

fn as_n(v: &Value) -> CliResult<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| bad("\"n\" must be a positive integer"))
}

/// A rational given as `"p/q"`, `"p"` or a JSON integer.
pub fn rational(v: &Value) -> CliResult<Rational> {
    match v {
        Value::String(s) => parse(s).map_err(|e| bad(e.to_string())),
        Value::Number(x) => x
            .as_i64()
            .map(tsppsd_core::rational::int)
            .ok_or_else(|| bad(format!("{x} is not an integer; write fractions as \"p/q\""))),
        other => Err(bad(format!("expected a rational, found {other}"))),
    }
}

fn vertices(v: &Value) -> CliResult<Vec<Vertex>> {
    v.as_array()
        .ok_or_else(|| bad("vertex set must be an array"))?
        .iter()
        .map(|x| {
            x.as_u64()
                .and_then(|y| Vertex::try_from(y).ok())
                .ok_or_else(|| bad(format!("bad vertex {x}")))
        })
        .collect()
}

fn edge(v: &Value) -> CliResult<Edge> {
    v.as_str()
        .ok_or_else(|| bad("edges are written as \"u-v\" strings"))?
        .parse::<Edge>()
        .map_err(|e| bad(e.to_string()))
}

pub fn facet_from_json(v: &Value) -> CliResult<FacetSpec> {
    let obj = v
        .as_object()
        .ok_or_else(|| bad("functional spec must be a JSON object"))?;
    let kind = field(obj, "kind")?
        .as_str()
        .ok_or_else(|| bad("\"kind\" must be a string"))?;
    Ok(match kind {
        "subtour" => FacetSpec::Subtour {
            n: as_n(field(obj, "n")?)?,
            u: vertices(field(obj, "U")?)?,
        },
        "edge-upper" => FacetSpec::EdgeUpper {
            n: as_n(field(obj, "n")?)?,
            edge: edge(field(obj, "edge")?)?,
        },
        "edge-lower" => FacetSpec::EdgeLower {
            n: as_n(field(obj, "n")?)?,
            edge: edge(field(obj, "edge")?)?,
        },
        "two-matching" => FacetSpec::TwoMatching {
            n: as_n(field(obj, "n")?)?,
            u: vertices(field(obj, "U")?)?,
            matching: field(obj, "F")?
                .as_array()
                .ok_or_else(|| bad("\"F\" must be an array of edges"))?
                .iter()
                .map(edge)
                .collect::<CliResult<_>>()?,
        },
        "ones" => FacetSpec::Ones {
            n: as_n(field(obj, "n")?)?,
        },
        "explicit" => {
            let n = as_n(field(obj, "n")?)?;
            let constant = match obj.get("constant") {
                Some(c) => rational(c)?,
                None => tsppsd_core::rational::int(0),
            };
            let mut coeffs = Vec::new();
            if let Some(c) = obj.get("coeffs") {
                for (k, val) in c.as_object().ok_or_else(|| bad("\"coeffs\" must be an object"))? {
                    let e: Edge = k.parse().map_err(|e: tsppsd_core::Error| bad(e.to_string()))?;
                    coeffs.push((e, rational(val)?));
                }
            }
            FacetSpec::Explicit(LinearFunctional::from_parts(n, constant, coeffs)?)
        }
        "combination" => {
            let terms = field(obj, "terms")?
                .as_array()
                .ok_or_else(|| bad("\"terms\" must be an array"))?;
            let mut out = Vec::with_capacity(terms.len());
            for t in terms {
                let t = t.as_object().ok_or_else(|| bad("each term must be an object"))?;
                out.push((rational(field(t, "scale")?)?, facet_from_json(field(t, "func")?)?));
            }
            FacetSpec::Combination(out)
        }
        other => return Err(bad(format!("unknown functional kind \"{other}\""))),
    })
}

pub fn facet_to_json(spec: &FacetSpec) -> Value {
    let edge_s = |e: &Edge| Value::String(e.to_string());
    match spec {
        FacetSpec::Subtour { n, u } => json!({"kind": "subtour", "n": n, "U": u}),
        FacetSpec::EdgeUpper { n, edge } => json!({"kind": "edge-upper", "n": n, "edge": edge_s(edge)}),
        FacetSpec::EdgeLower { n, edge } => json!({"kind": "edge-lower", "n": n, "edge": edge_s(edge)}),
        FacetSpec::TwoMatching { n, u, matching } => json!({
            "kind": "two-matching",
            "n": n,
            "U": u,
            "F": matching.iter().map(edge_s).collect::<Vec<_>>(),
        }),
        FacetSpec::Ones { n } => json!({"kind": "ones", "n": n}),
        FacetSpec::Explicit(f) => {
            let mut coeffs = Map::new();
            for e in tsppsd_core::cycles::all_edges(f.n()) {
                let c = f.coeff(e);
                if !num_traits::Zero::is_zero(c) {
                    coeffs.insert(e.to_string(), Value::String(to_pq(c)));
                }
            }
            json!({"kind": "explicit", "n": f.n(), "constant": to_pq(f.constant()), "coeffs": coeffs})
        }
        FacetSpec::Combination(terms) => json!({
            "kind": "combination",
            "terms": terms
                .iter()
                .map(|(s, t)| json!({"scale": to_pq(s), "func": facet_to_json(t)}))
                .collect::<Vec<_>>(),
        }),
    }
}

pub fn read_facet(path: &Path) -> CliResult<FacetSpec> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let v: Value = serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    facet_from_json(&v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let specs = [
            json!({"kind": "subtour", "n": 8, "U": [1, 2, 3]}),
            json!({"kind": "edge-lower", "n": 6, "edge": "2-5"}),
            json!({"kind": "two-matching", "n": 7, "U": [1, 2, 3], "F": ["1-4", "2-5", "3-6"]}),
            json!({"kind": "explicit", "n": 6, "constant": "-5/4", "coeffs": {"1-4": "5/8"}}),
            json!({"kind": "combination", "terms": [
                {"scale": "3/1", "func": {"kind": "ones", "n": 6}},
                {"scale": "-2/1", "func": {"kind": "subtour", "n": 6, "U": [1, 2]}}
            ]}),
        ];
        for s in specs {
            let f = facet_from_json(&s).unwrap();
            assert_eq!(facet_from_json(&facet_to_json(&f)).unwrap(), f);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(facet_from_json(&json!({"kind": "subtour", "n": 8})).is_err());
        assert!(facet_from_json(&json!({"kind": "nope", "n": 8})).is_err());
        assert!(facet_from_json(&json!({"kind": "explicit", "n": 6, "constant": 0.5})).is_err());
        assert!(facet_from_json(&json!({"kind": "explicit", "n": 6, "coeffs": {"1-9": "1"}})).is_err());
        assert!(facet_from_json(&json!([1, 2])).is_err());
    }
}
