use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::score::EdgeScore;
use super::synth::SyntheticSpec;

/// One detector scored against one truth map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub image: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<SyntheticSpec>,
    pub detector: String,
    /// Truth subset the record is restricted to; `None` for the full truth map.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<String>,
    #[serde(flatten)]
    pub score: EdgeScore,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanScore {
    pub detector: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<String>,
    pub count: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub pratt_fom: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EvalReport {
    pub records: Vec<ScoreRecord>,
    pub means: Vec<MeanScore>,
}

impl EvalReport {
    /// Builds a report with means per (detector, region), ordered by name.
    pub fn from_records(records: Vec<ScoreRecord>) -> Self {
        let mut groups: BTreeMap<(String, Option<String>), Vec<&EdgeScore>> = BTreeMap::new();
        for r in &records {
            groups
                .entry((r.detector.clone(), r.region.clone()))
                .or_default()
                .push(&r.score);
        }
        let means = groups
            .into_iter()
            .map(|((detector, region), scores)| {
                let n = scores.len() as f64;
                let mean = |f: fn(&EdgeScore) -> f64| scores.iter().map(|s| f(s)).sum::<f64>() / n;
                MeanScore {
                    detector,
                    region,
                    count: scores.len(),
                    precision: mean(|s| s.precision),
                    recall: mean(|s| s.recall),
                    f1: mean(|s| s.f1),
                    pratt_fom: mean(|s| s.pratt_fom),
                }
            })
            .collect();
        Self { records, means }
    }

    pub fn find(&self, detector: &str, region: Option<&str>) -> Option<&ScoreRecord> {
        self.records
            .iter()
            .find(|r| r.detector == detector && r.region.as_deref() == region)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
