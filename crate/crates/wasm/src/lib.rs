//! Browser bindings used by the demo page in `www/`.

use critgraph::json::{int_array, int_value, parse_graph};
use critgraph::structures::enumerate_structures;
use critgraph::{matrix_at, sieve, DiagonalAssignment, Result, SieveMode};
use num_bigint::BigInt;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest N and box accepted from the page, to keep the tab responsive.
pub const MAX_VALUE_LIMIT: u64 = 2000;
pub const STRUCTURE_BOUND_LIMIT: u64 = 40;

fn parse_diag(text: &str) -> Result<Vec<BigInt>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<BigInt>().map_err(|_| critgraph::Error::Parse { pos: 0, msg: format!("bad integer {s}") }))
        .collect()
}

pub fn eval_json(graph: &str, diag: &str) -> Result<String> {
    let g = parse_graph(graph)?;
    let m = matrix_at(&g, &DiagonalAssignment::new(parse_diag(diag)?)?)?;
    let phi = m.smith_normal_form();
    Ok(json!({
        "det": int_value(&m.determinant()),
        "pd": m.is_positive_definite()?,
        "phi": int_array(&phi.nontrivial()),
        "cyclic": phi.is_cyclic(),
    })
    .to_string())
}

pub fn sieve_json(graph: &str, mode: &str, r: u64, max_value: u64) -> Result<String> {
    let g = parse_graph(graph)?;
    let mode: SieveMode = mode.parse()?;
    let max_value = max_value.min(MAX_VALUE_LIMIT);
    Ok(sieve(&g, mode, r, max_value, max_value + 2)?.to_json().to_string())
}

pub fn structures_json(graph: &str, r: u64, bound: u64) -> Result<String> {
    let g = parse_graph(graph)?;
    let e = enumerate_structures(&g, r, bound.min(STRUCTURE_BOUND_LIMIT))?;
    Ok(json!({
        "complete_within_box": e.complete_within_box,
        "structures": e.structures.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
    })
    .to_string())
}

fn js(r: Result<String>) -> std::result::Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn eval(graph: &str, diag: &str) -> std::result::Result<String, JsError> {
    js(eval_json(graph, diag))
}

#[wasm_bindgen(js_name = sieve)]
pub fn sieve_js(graph: &str, mode: &str, r: u32, max_value: u32) -> std::result::Result<String, JsError> {
    js(sieve_json(graph, mode, r as u64, max_value as u64))
}

#[wasm_bindgen]
pub fn structures(graph: &str, r: u32, bound: u32) -> std::result::Result<String, JsError> {
    js(structures_json(graph, r as u64, bound as u64))
}
