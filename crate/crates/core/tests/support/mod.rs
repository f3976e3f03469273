//! Shared helpers for integration tests.
#![allow(dead_code)]

use serde_json::Value;

/// Gaussian set as (label, center, sigma).
type Set = (String, f64, f64);

struct Rule {
    terms: Vec<(usize, usize)>,
    or: bool,
    consequent: usize,
    weight: f64,
}

/// Mamdani reference written directly against the rule-base JSON: min/max
/// antecedents, clipped consequents, sum (clipped at 1) or max aggregation,
/// and a centroid over a dense sample grid.
pub struct DenseOracle {
    inputs: Vec<(String, Vec<Set>)>,
    rules: Vec<Rule>,
    xs: Vec<f64>,
    /// Output membership per set, sampled on `xs`.
    table: Vec<Vec<f64>>,
    lo: f64,
    hi: f64,
}

fn sets(v: &Value) -> Vec<Set> {
    v["sets"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| {
            (
                s["label"].as_str().unwrap().to_string(),
                s["center"].as_f64().unwrap(),
                s["sigma"].as_f64().unwrap(),
            )
        })
        .collect()
}

fn gauss(x: f64, c: f64, s: f64) -> f64 {
    (-(x - c) * (x - c) / (2.0 * s * s)).exp()
}

impl DenseOracle {
    pub fn from_json(json: &str, samples: usize) -> Self {
        let doc: Value = serde_json::from_str(json).unwrap();
        let inputs: Vec<(String, Vec<Set>)> = doc["inputs"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| (v["name"].as_str().unwrap().to_string(), sets(v)))
            .collect();
        let out_sets = sets(&doc["output"]);
        let universe = doc["output"]["universe"].as_array().unwrap();
        let (lo, hi) = (universe[0].as_f64().unwrap(), universe[1].as_f64().unwrap());
        let find_input = |name: &str, label: &str| {
            let v = inputs.iter().position(|(n, _)| n == name).unwrap();
            let s = inputs[v].1.iter().position(|(l, _, _)| l == label).unwrap();
            (v, s)
        };
        let rules = doc["rules"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| Rule {
                terms: r["if"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|t| find_input(t["var"].as_str().unwrap(), t["is"].as_str().unwrap()))
                    .collect(),
                or: r["connective"].as_str() == Some("or"),
                consequent: out_sets
                    .iter()
                    .position(|(l, _, _)| l == r["then"]["is"].as_str().unwrap())
                    .unwrap(),
                weight: r["weight"].as_f64().unwrap_or(1.0),
            })
            .collect();
        let xs: Vec<f64> = (0..samples)
            .map(|j| lo + (hi - lo) * j as f64 / (samples - 1) as f64)
            .collect();
        let table = out_sets
            .iter()
            .map(|&(_, c, s)| xs.iter().map(|&x| gauss(x, c, s)).collect())
            .collect();
        Self {
            inputs,
            rules,
            xs,
            table,
            lo,
            hi,
        }
    }

    pub fn infer(&self, crisp: &[f64], max_aggregation: bool) -> f64 {
        let strengths: Vec<(usize, f64)> = self
            .rules
            .iter()
            .map(|r| {
                let mus = r.terms.iter().map(|&(v, s)| {
                    let (_, c, sg) = self.inputs[v].1[s];
                    gauss(crisp[v], c, sg)
                });
                let fire = if r.or {
                    mus.fold(0.0, f64::max)
                } else {
                    mus.fold(1.0, f64::min)
                };
                (r.consequent, r.weight * fire)
            })
            .collect();
        let mut num = 0.0;
        let mut den = 0.0;
        for (j, &x) in self.xs.iter().enumerate() {
            let mut agg = 0.0f64;
            for &(set, s) in &strengths {
                let clipped = s.min(self.table[set][j]);
                agg = if max_aggregation {
                    agg.max(clipped)
                } else {
                    agg + clipped
                };
            }
            let agg = agg.min(1.0);
            num += x * agg;
            den += agg;
        }
        if den == 0.0 {
            0.5 * (self.lo + self.hi)
        } else {
            num / den
        }
    }
}

/// Writes `img` as a PGM into `dir` and returns the path.
pub fn write_pgm(
    dir: &std::path::Path,
    name: &str,
    img: &fuzzy_edge::GrayImage,
) -> std::path::PathBuf {
    let p = dir.join(name);
    fuzzy_edge::imgio::save_image(img, &p).unwrap();
    p
}

/// Pseudo-random test image with integer levels.
pub fn noise_image(w: usize, h: usize, seed: u64) -> fuzzy_edge::GrayImage {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    fuzzy_edge::GrayImage::from_fn(w, h, |_, _| rng.random_range(0..=255) as f64)
}
