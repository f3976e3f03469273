use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Gaussian membership function `exp(-(x - center)² / (2·sigma²))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipFunction {
    pub label: String,
    pub center: f64,
    pub sigma: f64,
}

impl MembershipFunction {
    pub fn new(label: impl Into<String>, center: f64, sigma: f64) -> Self {
        Self {
            label: label.into(),
            center,
            sigma,
        }
    }

    #[inline]
    pub fn membership(&self, x: f64) -> f64 {
        membership(self, x)
    }
}

#[inline]
pub fn membership(mf: &MembershipFunction, x: f64) -> f64 {
    let d = x - mf.center;
    (-(d * d) / (2.0 * mf.sigma * mf.sigma)).exp()
}

/// A linguistic variable over an interval universe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyVariable {
    pub name: String,
    pub universe: (f64, f64),
    pub sets: Vec<MembershipFunction>,
}

impl FuzzyVariable {
    /// Variable over `[0, 255]`.
    pub fn byte_range(name: impl Into<String>, sets: Vec<MembershipFunction>) -> Self {
        Self {
            name: name.into(),
            universe: (0.0, 255.0),
            sets,
        }
    }

    pub fn set(&self, label: &str) -> Option<&MembershipFunction> {
        self.sets.iter().find(|s| s.label == label)
    }

    pub(crate) fn set_index(&self, label: &str) -> Option<usize> {
        self.sets.iter().position(|s| s.label == label)
    }
}

/// `variable is label`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    #[serde(rename = "var")]
    pub variable: String,
    #[serde(rename = "is")]
    pub label: String,
}

impl Term {
    pub fn new(variable: impl Into<String>, label: impl Into<String>) -> Self {
        Self {
            variable: variable.into(),
            label: label.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connective {
    #[default]
    And,
    Or,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyRule {
    #[serde(rename = "if")]
    pub antecedent: Vec<Term>,
    #[serde(default)]
    pub connective: Connective,
    #[serde(rename = "then")]
    pub consequent: Term,
    #[serde(default = "one")]
    pub weight: f64,
}

fn one() -> f64 {
    1.0
}

impl FuzzyRule {
    pub fn new(
        antecedent: Vec<Term>,
        connective: Connective,
        consequent: Term,
        weight: f64,
    ) -> Self {
        Self {
            antecedent,
            connective,
            consequent,
            weight,
        }
    }
}

/// How clipped rule outputs are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregation {
    /// Pointwise sum, clipped at 1.
    #[default]
    Sum,
    /// Pointwise maximum.
    Max,
}

impl fmt::Display for Aggregation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aggregation::Sum => "sum",
            Aggregation::Max => "max",
        })
    }
}

impl FromStr for Aggregation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "sum" => Ok(Aggregation::Sum),
            "max" => Ok(Aggregation::Max),
            other => Err(Error::InvalidArgument(format!(
                "unknown aggregation '{other}' (expected sum or max)"
            ))),
        }
    }
}

// The engine implements exactly one choice for each of these; they are kept
// as enums so rule-base documents state them explicitly.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TNorm {
    #[default]
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SNorm {
    #[default]
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Defuzzifier {
    #[default]
    Centroid,
}
