//! Mamdani fuzzy inference over discretised universes.
//!
//! Gaussian sets, min/max norms, min implication, sum-or-max aggregation and
//! a discrete centroid defuzzifier. A [`FuzzyRuleBase`] is validated and
//! compiled once, then evaluated many times (once per pixel in the edge
//! pipeline), so the hot path works on index-resolved rules and a
//! precomputed table of output memberships.

mod types;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use types::{
    membership, Aggregation, Connective, Defuzzifier, FuzzyRule, FuzzyVariable, MembershipFunction,
    SNorm, TNorm, Term,
};

use crate::error::{Error, Result};

pub const DEFAULT_UNIVERSE_SAMPLES: usize = 256;
pub const MIN_UNIVERSE_SAMPLES: usize = 64;

/// Serialized form of a rule base (the JSON document schema).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleBaseDocument {
    pub inputs: Vec<FuzzyVariable>,
    pub output: FuzzyVariable,
    pub rules: Vec<FuzzyRule>,
    #[serde(default)]
    pub and_norm: TNorm,
    #[serde(default)]
    pub or_norm: SNorm,
    #[serde(default)]
    pub implication: TNorm,
    #[serde(default)]
    pub aggregation: Aggregation,
    #[serde(default)]
    pub defuzzifier: Defuzzifier,
    #[serde(default = "default_samples")]
    pub universe_samples: usize,
}

fn default_samples() -> usize {
    DEFAULT_UNIVERSE_SAMPLES
}

#[derive(Debug, Clone)]
struct CompiledRule {
    /// (input index, set index) per antecedent term.
    terms: Vec<(usize, usize)>,
    connective: Connective,
    consequent: usize,
    weight: f64,
}

/// A validated, immutable rule base ready for inference.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RuleBaseDocument", into = "RuleBaseDocument")]
pub struct FuzzyRuleBase {
    doc: RuleBaseDocument,
    compiled: Vec<CompiledRule>,
    /// Sample positions of the output universe.
    xs: Vec<f64>,
    /// `table[set][j]` = membership of output set `set` at `xs[j]`.
    table: Vec<Vec<f64>>,
}

impl PartialEq for FuzzyRuleBase {
    fn eq(&self, other: &Self) -> bool {
        self.doc == other.doc
    }
}

impl From<FuzzyRuleBase> for RuleBaseDocument {
    fn from(base: FuzzyRuleBase) -> Self {
        base.doc
    }
}

impl TryFrom<RuleBaseDocument> for FuzzyRuleBase {
    type Error = Error;

    fn try_from(doc: RuleBaseDocument) -> Result<Self> {
        Self::from_document(doc)
    }
}

fn validate_variable(v: &FuzzyVariable) -> Result<()> {
    let (lo, hi) = v.universe;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::RuleBase(format!(
            "variable {}: bad universe [{lo}, {hi}]",
            v.name
        )));
    }
    if v.sets.is_empty() {
        return Err(Error::RuleBase(format!(
            "variable {} has no fuzzy sets",
            v.name
        )));
    }
    for (i, s) in v.sets.iter().enumerate() {
        if !(lo..=hi).contains(&s.center) {
            return Err(Error::RuleBase(format!(
                "variable {}: set {} center {} outside universe",
                v.name, s.label, s.center
            )));
        }
        if !(s.sigma.is_finite() && s.sigma > 0.0) {
            return Err(Error::RuleBase(format!(
                "variable {}: set {} needs a positive sigma",
                v.name, s.label
            )));
        }
        if v.sets[..i].iter().any(|t| t.label == s.label) {
            return Err(Error::RuleBase(format!(
                "variable {}: duplicate label {}",
                v.name, s.label
            )));
        }
    }
    Ok(())
}

impl FuzzyRuleBase {
    pub fn new(
        inputs: Vec<FuzzyVariable>,
        output: FuzzyVariable,
        rules: Vec<FuzzyRule>,
        aggregation: Aggregation,
        universe_samples: usize,
    ) -> Result<Self> {
        Self::from_document(RuleBaseDocument {
            inputs,
            output,
            rules,
            and_norm: TNorm::Min,
            or_norm: SNorm::Max,
            implication: TNorm::Min,
            aggregation,
            defuzzifier: Defuzzifier::Centroid,
            universe_samples,
        })
    }

    pub fn from_document(doc: RuleBaseDocument) -> Result<Self> {
        if doc.rules.is_empty() {
            return Err(Error::RuleBase("at least one rule is required".into()));
        }
        if doc.universe_samples < MIN_UNIVERSE_SAMPLES {
            return Err(Error::RuleBase(format!(
                "universe_samples must be at least {MIN_UNIVERSE_SAMPLES}, got {}",
                doc.universe_samples
            )));
        }
        for v in doc.inputs.iter().chain(std::iter::once(&doc.output)) {
            validate_variable(v)?;
        }
        for (i, v) in doc.inputs.iter().enumerate() {
            if doc.inputs[..i].iter().any(|u| u.name == v.name) || v.name == doc.output.name {
                return Err(Error::RuleBase(format!(
                    "duplicate variable name {}",
                    v.name
                )));
            }
        }
        let compiled = doc
            .rules
            .iter()
            .enumerate()
            .map(|(i, r)| {
                compile_rule(&doc, r).map_err(|e| Error::RuleBase(format!("rule {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;

        let (lo, hi) = doc.output.universe;
        let n = doc.universe_samples;
        let step = (hi - lo) / (n - 1) as f64;
        let mut xs: Vec<f64> = (0..n).map(|j| lo + j as f64 * step).collect();
        xs[n - 1] = hi;
        let table = doc
            .output
            .sets
            .iter()
            .map(|mf| xs.iter().map(|&x| membership(mf, x)).collect())
            .collect();
        Ok(Self {
            doc,
            compiled,
            xs,
            table,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: RuleBaseDocument = serde_json::from_str(text)?;
        Self::from_document(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.doc).expect("rule base serializes")
    }

    pub fn document(&self) -> &RuleBaseDocument {
        &self.doc
    }

    pub fn inputs(&self) -> &[FuzzyVariable] {
        &self.doc.inputs
    }

    pub fn output(&self) -> &FuzzyVariable {
        &self.doc.output
    }

    pub fn rules(&self) -> &[FuzzyRule] {
        &self.doc.rules
    }

    pub fn aggregation(&self) -> Aggregation {
        self.doc.aggregation
    }

    pub fn universe_samples(&self) -> usize {
        self.doc.universe_samples
    }

    /// Same rules with a different aggregation operator.
    pub fn with_aggregation(&self, aggregation: Aggregation) -> Self {
        let mut out = self.clone();
        out.doc.aggregation = aggregation;
        out
    }

    pub fn input_index(&self, name: &str) -> Option<usize> {
        self.doc.inputs.iter().position(|v| v.name == name)
    }

    /// Firing strength of `rule` under named crisp inputs:
    /// `weight × (min | max)` of the antecedent memberships.
    pub fn fire_rule(&self, rule: &FuzzyRule, crisp: &HashMap<String, f64>) -> Result<f64> {
        let mut degrees = Vec::with_capacity(rule.antecedent.len());
        for t in &rule.antecedent {
            let var = self
                .doc
                .inputs
                .iter()
                .find(|v| v.name == t.variable)
                .ok_or_else(|| Error::RuleBase(format!("unknown input variable {}", t.variable)))?;
            let mf = var.set(&t.label).ok_or_else(|| {
                Error::RuleBase(format!("variable {} has no set {}", t.variable, t.label))
            })?;
            let x = crisp.get(&t.variable).ok_or_else(|| {
                Error::InvalidArgument(format!("no crisp value for {}", t.variable))
            })?;
            degrees.push(membership(mf, *x));
        }
        Ok(rule.weight * combine(rule.connective, degrees.into_iter()))
    }

    /// Crisp output for inputs given in declaration order of [`Self::inputs`].
    pub fn infer(&self, crisp: &[f64]) -> Result<f64> {
        if crisp.len() != self.doc.inputs.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} crisp inputs, got {}",
                self.doc.inputs.len(),
                crisp.len()
            )));
        }
        if let Some(v) = crisp.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite crisp input {v}"
            )));
        }
        Ok(self.infer_unchecked(crisp))
    }

    pub fn infer_named(&self, crisp: &HashMap<String, f64>) -> Result<f64> {
        let values =
            self.doc
                .inputs
                .iter()
                .map(|v| {
                    crisp.get(&v.name).copied().ok_or_else(|| {
                        Error::InvalidArgument(format!("no crisp value for {}", v.name))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
        self.infer(&values)
    }

    pub(crate) fn infer_unchecked(&self, crisp: &[f64]) -> f64 {
        let n_sets = self.doc.output.sets.len();
        // Firing strengths grouped by consequent set. Each group is summed in
        // ascending order so the result depends only on the multiset of
        // strengths, not on rule order.
        let mut groups: Vec<Vec<f64>> = vec![Vec::new(); n_sets];
        for r in &self.compiled {
            let degrees = r
                .terms
                .iter()
                .map(|&(v, s)| membership(&self.doc.inputs[v].sets[s], crisp[v]));
            let strength = r.weight * combine(r.connective, degrees);
            if strength > 0.0 {
                groups[r.consequent].push(strength);
            }
        }
        for g in &mut groups {
            g.sort_by(f64::total_cmp);
        }

        let mut num = 0.0;
        let mut den = 0.0;
        for (j, &x) in self.xs.iter().enumerate() {
            let mut agg = 0.0f64;
            for (set, g) in groups.iter().enumerate() {
                let mu = self.table[set][j];
                for &s in g {
                    let clipped = s.min(mu);
                    agg = match self.doc.aggregation {
                        Aggregation::Sum => agg + clipped,
                        Aggregation::Max => agg.max(clipped),
                    };
                }
            }
            let agg = agg.min(1.0);
            num += x * agg;
            den += agg;
        }
        let (lo, hi) = self.doc.output.universe;
        if den == 0.0 {
            return 0.5 * (lo + hi);
        }
        (num / den).clamp(lo, hi)
    }
}

fn combine(connective: Connective, degrees: impl Iterator<Item = f64>) -> f64 {
    match connective {
        Connective::And => degrees.fold(1.0, f64::min),
        Connective::Or => degrees.fold(0.0, f64::max),
    }
}

fn compile_rule(doc: &RuleBaseDocument, rule: &FuzzyRule) -> Result<CompiledRule> {
    if rule.antecedent.is_empty() {
        return Err(Error::RuleBase("empty antecedent".into()));
    }
    if !(0.0..=1.0).contains(&rule.weight) {
        return Err(Error::RuleBase(format!(
            "weight {} outside [0, 1]",
            rule.weight
        )));
    }
    let terms = rule
        .antecedent
        .iter()
        .map(|t| {
            let vi = doc
                .inputs
                .iter()
                .position(|v| v.name == t.variable)
                .ok_or_else(|| Error::RuleBase(format!("unknown input variable {}", t.variable)))?;
            let si = doc.inputs[vi].set_index(&t.label).ok_or_else(|| {
                Error::RuleBase(format!("variable {} has no set {}", t.variable, t.label))
            })?;
            Ok((vi, si))
        })
        .collect::<Result<Vec<_>>>()?;
    if rule.consequent.variable != doc.output.name {
        return Err(Error::RuleBase(format!(
            "consequent names {} but the output variable is {}",
            rule.consequent.variable, doc.output.name
        )));
    }
    let consequent = doc
        .output
        .set_index(&rule.consequent.label)
        .ok_or_else(|| Error::RuleBase(format!("output has no set {}", rule.consequent.label)))?;
    Ok(CompiledRule {
        terms,
        connective: rule.connective,
        consequent,
        weight: rule.weight,
    })
}
