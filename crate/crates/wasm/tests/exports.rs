use serde_json::Value;

use condalg_wasm::{conditional, probability, refute};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn conditional_extends_once() {
    let v = parse(conditional("a c d", "{a,c}", "{a}"));
    assert_eq!(v["ok"], true);
    assert_eq!(v["element"], "{(a,d),(d,a)}");
    assert_eq!(v["stage"], 1);
    assert_eq!(v["stages"].as_array().unwrap().len(), 2);
}

#[test]
fn probability_in_both_fields() {
    let v = parse(probability("a,c,d", "1/4 1/4 1/2", "[{a,c}]{a}"));
    assert_eq!((v["value"].as_str(), v["field"].as_str()), (Some("1/2"), Some("rational")));
    let v = parse(probability("a c d", "1/2 1/2 0", "{d}"));
    assert_eq!((v["value"].as_str(), v["field"].as_str()), (Some("e/3"), Some("eps")));
}

#[test]
fn refute_finds_collapse_counterexample() {
    let v = parse(refute("[X]Y <-> Y", 2000));
    assert_eq!(v["refuted"], true);
    let v = parse(refute("[X]Y -> X -> Y", 500));
    assert_eq!(v["refuted"], false);
}

#[test]
fn errors_are_reported_not_thrown() {
    for out in [
        conditional("a a", "{a}", "{a}"),
        conditional("a b", "{z}", "{a}"),
        probability("a b", "1/2", "{a}"),
        probability("a b", "1/2 1/3", "{a}"),
        refute("[X", 10),
    ] {
        let v = parse(out);
        assert_eq!(v["ok"], false);
        assert!(v["error"].as_str().unwrap().len() > 3);
    }
}
