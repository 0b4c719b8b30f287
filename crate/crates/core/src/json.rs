//! JSON forms: integers that fit in 64 bits are numbers, larger ones are decimal strings.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::family::Family;
use crate::graph::Multigraph;
use crate::linalg::ExactMatrix;

pub fn int_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn int_array(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int_value).collect())
}

pub fn parse_int(v: &Value) -> Result<BigInt> {
    let bad = || Error::Parse { pos: 0, msg: format!("expected an integer, found {v}") };
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).or_else(|| n.as_u64().map(BigInt::from)).ok_or_else(bad),
        Value::String(s) => s.trim().parse().map_err(|_| bad()),
        _ => Err(bad()),
    }
}

pub mod bigint {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&super::int_value(x), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        super::parse_int(&v).map_err(serde::de::Error::custom)
    }
}

pub fn matrix_to_json(m: &ExactMatrix) -> Value {
    json!({"dim": m.dim(), "rows": m.rows().iter().map(|r| int_array(r)).collect::<Vec<_>>()})
}

pub fn matrix_from_json(v: &Value) -> Result<ExactMatrix> {
    let bad = |msg: &str| Error::Parse { pos: 0, msg: msg.into() };
    let rows = v.get("rows").and_then(Value::as_array).ok_or_else(|| bad("missing rows"))?;
    let parsed: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.as_array().ok_or_else(|| bad("row is not an array"))?.iter().map(parse_int).collect())
        .collect::<Result<_>>()?;
    if let Some(d) = v.get("dim").and_then(Value::as_u64) {
        if d as usize != parsed.len() {
            return Err(Error::LengthMismatch { expected: d as usize, got: parsed.len() });
        }
    }
    ExactMatrix::from_rows(parsed)
}

pub fn graph_to_json(g: &Multigraph) -> Value {
    json!({"n": g.order(), "edges": g.edges().iter().map(|&(i, j, m)| json!([i, j, m])).collect::<Vec<_>>()})
}

pub fn graph_from_json(v: &Value) -> Result<Multigraph> {
    let bad = |msg: &str| Error::Parse { pos: 0, msg: msg.into() };
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("missing n"))? as usize;
    let edges = v.get("edges").and_then(Value::as_array).ok_or_else(|| bad("missing edges"))?;
    let mut list = Vec::with_capacity(edges.len());
    for e in edges {
        let a = e.as_array().ok_or_else(|| bad("edge is not an array"))?;
        let num = |k: usize| a.get(k).and_then(Value::as_u64).ok_or_else(|| bad("edge entries must be nonnegative integers"));
        let m = if a.len() >= 3 { num(2)? } else { 1 };
        if a.len() < 2 || a.len() > 3 {
            return Err(bad("edge must be [i, j] or [i, j, mult]"));
        }
        list.push((num(0)? as usize, num(1)? as usize, u32::try_from(m).map_err(|_| bad("multiplicity too large"))?));
    }
    Multigraph::from_edges(n, &list)
}

/// Graph from either the family DSL or the JSON edge-list form.
pub fn parse_graph(s: &str) -> Result<Multigraph> {
    let t = s.trim();
    if t.starts_with('{') {
        let v: Value = serde_json::from_str(t).map_err(|e| Error::Parse { pos: e.column().saturating_sub(1), msg: e.to_string() })?;
        graph_from_json(&v)
    } else {
        Family::parse(t)?.build()
    }
}
