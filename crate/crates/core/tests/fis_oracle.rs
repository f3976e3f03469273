//! Production inference against the dense-grid reference on several rule bases.

mod support;

use fuzzy_edge::fis::{Aggregation, FuzzyRuleBase};
use fuzzy_edge::pipeline::default_rule_base_json;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::DenseOracle;

const MIXED: &str = r#"{
  "inputs": [
    {"name": "A", "universe": [0, 255], "sets": [
      {"label": "dark", "center": 20, "sigma": 30},
      {"label": "bright", "center": 230, "sigma": 45}]},
    {"name": "B", "universe": [0, 255], "sets": [
      {"label": "flat", "center": 0, "sigma": 70},
      {"label": "busy", "center": 200, "sigma": 25}]}
  ],
  "output": {"name": "OUT", "universe": [0, 255], "sets": [
    {"label": "off", "center": 10, "sigma": 40},
    {"label": "mid", "center": 140, "sigma": 20},
    {"label": "on", "center": 250, "sigma": 60}]},
  "rules": [
    {"if": [{"var": "A", "is": "dark"}, {"var": "B", "is": "flat"}], "then": {"var": "OUT", "is": "off"}},
    {"if": [{"var": "A", "is": "bright"}, {"var": "B", "is": "busy"}], "connective": "or", "then": {"var": "OUT", "is": "on"}, "weight": 0.6},
    {"if": [{"var": "B", "is": "busy"}], "then": {"var": "OUT", "is": "mid"}, "weight": 0.9}
  ],
  "aggregation": "max"
}"#;

fn compare(json: &str, inputs: usize, seed: u64) {
    let oracle = DenseOracle::from_json(json, 100_000);
    let base = FuzzyRuleBase::from_json(json).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for agg in [Aggregation::Sum, Aggregation::Max] {
        let b = base.with_aggregation(agg);
        for _ in 0..150 {
            let x: Vec<f64> = (0..inputs).map(|_| rng.random_range(0.0..=255.0)).collect();
            let got = b.infer(&x).unwrap();
            let want = oracle.infer(&x, agg == Aggregation::Max);
            assert!((got - want).abs() < 0.5, "{agg:?} {x:?}: {got} vs {want}");
        }
    }
}

#[test]
fn default_rule_base_matches_dense_reference() {
    compare(default_rule_base_json(), 3, 1);
}

#[test]
fn mixed_connectives_and_weights_match_dense_reference() {
    compare(MIXED, 2, 2);
}

#[test]
fn corner_inputs_match_dense_reference() {
    let oracle = DenseOracle::from_json(default_rule_base_json(), 100_000);
    let base = FuzzyRuleBase::from_json(default_rule_base_json()).unwrap();
    for h in [0.0, 128.0, 255.0] {
        for v in [0.0, 128.0, 255.0] {
            for d in [0.0, 128.0, 255.0] {
                let got = base.infer(&[h, v, d]).unwrap();
                assert!((got - oracle.infer(&[h, v, d], false)).abs() < 0.5);
            }
        }
    }
}
