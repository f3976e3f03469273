// Evaluates the bundled edge rule base on a few band-energy triples and
// builds a small two-input rule base from JSON.

use std::collections::HashMap;
use std::error::Error;

use fuzzy_edge::fis::{Aggregation, FuzzyRuleBase};
use fuzzy_edge::pipeline::default_rule_base;

const THERMOSTAT: &str = r#"{
  "inputs": [
    {"name": "temp", "universe": [0, 40], "sets": [
      {"label": "cold", "center": 5, "sigma": 6},
      {"label": "hot", "center": 35, "sigma": 6}]},
    {"name": "humidity", "universe": [0, 100], "sets": [
      {"label": "dry", "center": 20, "sigma": 15},
      {"label": "wet", "center": 85, "sigma": 15}]}
  ],
  "output": {"name": "fan", "universe": [0, 100], "sets": [
    {"label": "slow", "center": 10, "sigma": 15},
    {"label": "fast", "center": 90, "sigma": 15}]},
  "rules": [
    {"if": [{"var": "temp", "is": "cold"}], "then": {"var": "fan", "is": "slow"}},
    {"if": [{"var": "temp", "is": "hot"}, {"var": "humidity", "is": "wet"}], "connective": "or",
     "then": {"var": "fan", "is": "fast"}, "weight": 0.9}
  ]
}"#;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let base = default_rule_base();
    let max_base = base.with_aggregation(Aggregation::Max);
    println!(
        "{:>5} {:>5} {:>5}   {:>7} {:>7}",
        "H", "V", "D", "sum", "max"
    );
    for hvd in [
        [0.0, 0.0, 0.0],
        [128.0, 128.0, 128.0],
        [255.0, 0.0, 0.0],
        [0.0, 0.0, 255.0],
        [200.0, 180.0, 90.0],
    ] {
        println!(
            "{:>5} {:>5} {:>5}   {:>7.2} {:>7.2}",
            hvd[0],
            hvd[1],
            hvd[2],
            base.infer(&hvd)?,
            max_base.infer(&hvd)?
        );
    }

    let fan = FuzzyRuleBase::from_json(THERMOSTAT)?;
    for (t, h) in [(8.0, 30.0), (22.0, 50.0), (33.0, 90.0)] {
        let crisp = HashMap::from([("temp".to_string(), t), ("humidity".to_string(), h)]);
        println!(
            "temp {t:>4} humidity {h:>4} -> fan {:.1}",
            fan.infer_named(&crisp)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
