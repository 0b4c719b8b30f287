use critgraph_wasm::{eval_json, sieve_json, structures_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn eval_a3() {
    let v = parse(eval_json("A3", "3, 2, 2").unwrap());
    assert_eq!(v["det"], 7);
    assert_eq!(v["pd"], true);
    assert_eq!(v["phi"], serde_json::json!([7]));
    assert!(eval_json("A3", "3,2").is_err());
    assert!(eval_json("A3", "3,x,2").is_err());
}

#[test]
fn sieve_a2() {
    let v = parse(sieve_json("A2", "any", 2, 20).unwrap());
    assert_eq!(v["complement"], serde_json::json!([0, 1, 2, 4, 6, 10, 12, 16, 18]));
    assert!(sieve_json("A2", "sometimes", 2, 20).is_err());
    let v = parse(sieve_json("A2", "any", 2, 1_000_000).unwrap());
    assert_eq!(v["max"], 2000);
}

#[test]
fn structures_on_banana() {
    let v = parse(structures_json("banana(2)", 1, 5).unwrap());
    assert_eq!(v["complete_within_box"], true);
    assert_eq!(v["structures"].as_array().unwrap().len(), 3);
}
