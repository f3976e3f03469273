//! End-to-end detector: wavelet decomposition, energy operator, per-band
//! scaling onto the 8-bit fuzzy universe, per-pixel inference, multilevel
//! fusion and optional thresholding.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dwt::{dwt2_multilevel, Wavelet};
use crate::energy::{energize_subbands, EnergyMode};
use crate::error::{Error, Result};
use crate::fis::{Aggregation, FuzzyRuleBase};
use crate::imgio::{rescale_to_byte_range, GrayImage};

const DEFAULT_RULES_JSON: &str = include_str!("../assets/default_rules.json");

/// The bundled edge rule base: inputs H, V, D and output EDGE, each with
/// Gaussian low/medium/high sets centred at 0/128/255 (sigma 54.2).
///
/// | rule | antecedent                              | consequent  | weight |
/// |------|-----------------------------------------|-------------|--------|
/// | R1   | H low AND V low AND D low               | EDGE low    | 1.0    |
/// | R2   | H high                                  | EDGE high   | 1.0    |
/// | R3   | V high                                  | EDGE high   | 1.0    |
/// | R4   | D high                                  | EDGE high   | 0.8    |
/// | R5   | H medium AND V medium AND D medium      | EDGE medium | 1.0    |
/// | R6   | H high AND V high AND D high            | EDGE high   | 1.0    |
pub fn default_rule_base() -> FuzzyRuleBase {
    FuzzyRuleBase::from_json(DEFAULT_RULES_JSON).expect("bundled rule base is valid")
}

pub fn default_rule_base_json() -> &'static str {
    DEFAULT_RULES_JSON
}

/// Dynamic range of 8-bit amplitudes expressed as an energy ratio, in dB.
pub fn byte_dynamic_range_db() -> f64 {
    20.0 * 255f64.log10()
}

/// How an energized band is mapped onto `[0, 255]` before inference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BandScaling {
    /// Min-max rescale of the raw energy.
    Linear,
    /// Min-max rescale of `ln(1 + E / (max E · 10^(-dB/10)))`. Energies
    /// within `dynamic_range_db` of the band maximum spread over the range,
    /// so weak edges next to strong ones stay visible.
    Log { dynamic_range_db: f64 },
}

impl Default for BandScaling {
    fn default() -> Self {
        BandScaling::Log {
            dynamic_range_db: byte_dynamic_range_db(),
        }
    }
}

impl fmt::Display for BandScaling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BandScaling::Linear => f.write_str("linear"),
            BandScaling::Log { dynamic_range_db } => write!(f, "log({dynamic_range_db} dB)"),
        }
    }
}

impl FromStr for BandScaling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(BandScaling::Linear),
            "log" => Ok(BandScaling::default()),
            other => Err(Error::InvalidArgument(format!(
                "unknown band scaling '{other}' (expected linear or log)"
            ))),
        }
    }
}

impl BandScaling {
    pub fn apply(&self, energy: &GrayImage) -> GrayImage {
        match *self {
            BandScaling::Linear => rescale_to_byte_range(energy),
            BandScaling::Log { dynamic_range_db } => {
                let peak = energy.max();
                if peak <= 0.0 {
                    return GrayImage::zeros(energy.width(), energy.height());
                }
                let floor = peak * 10f64.powf(-dynamic_range_db / 10.0);
                rescale_to_byte_range(&energy.map(|e| (e / floor).ln_1p()))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub wavelet: Wavelet,
    pub levels: usize,
    pub energy_mode: EnergyMode,
    pub band_scaling: BandScaling,
    pub rule_base: FuzzyRuleBase,
    /// Overrides the rule base's own aggregation setting.
    pub aggregation: Aggregation,
    /// `None` produces the continuous strength map only.
    pub binary_threshold: Option<f64>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            wavelet: Wavelet::Db2,
            levels: 1,
            energy_mode: EnergyMode::Directional,
            band_scaling: BandScaling::default(),
            rule_base: default_rule_base(),
            aggregation: Aggregation::Sum,
            binary_threshold: Some(128.0),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.levels == 0 {
            return Err(Error::Precondition("levels must be at least 1".into()));
        }
        if let Some(t) = self.binary_threshold {
            if !(0.0..=255.0).contains(&t) {
                return Err(Error::Precondition(format!(
                    "threshold {t} outside [0, 255]"
                )));
            }
        }
        if let BandScaling::Log { dynamic_range_db } = self.band_scaling {
            if !(dynamic_range_db.is_finite() && dynamic_range_db > 0.0) {
                return Err(Error::Precondition(format!(
                    "dynamic range must be positive, got {dynamic_range_db}"
                )));
            }
        }
        band_input_order(&self.rule_base)?;
        Ok(())
    }
}

/// Indices of the H, V and D variables within the rule base's inputs.
fn band_input_order(base: &FuzzyRuleBase) -> Result<[usize; 3]> {
    if base.inputs().len() != 3 {
        return Err(Error::RuleBase(format!(
            "edge rule base needs exactly the inputs H, V, D; found {}",
            base.inputs().len()
        )));
    }
    let find = |name: &str| {
        base.input_index(name)
            .ok_or_else(|| Error::RuleBase(format!("edge rule base has no input variable {name}")))
    };
    Ok([find("H")?, find("V")?, find("D")?])
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeResult {
    /// Fused edge strength in `[0, 255]` at the input resolution.
    pub strength: GrayImage,
    /// `{0, 255}` map, present iff a threshold was configured.
    pub binary: Option<GrayImage>,
    pub config_echo: PipelineConfig,
    /// Per-level strength maps at subband resolution, finest first.
    pub per_level_maps: Vec<GrayImage>,
}

/// Maps an original pixel coordinate to the subband coordinate `level` levels
/// down. Coefficient `i` of the even-phase transform is computed from samples
/// `2i - L + 1 ..= 2i`, centred at `2i - (L - 1)/2`.
fn subband_coord(mut p: usize, level: usize, filter_len: usize, size: usize) -> usize {
    for _ in 0..level {
        p = (p + filter_len / 2) / 2;
    }
    p.min(size - 1)
}

pub fn detect_edges(img: &GrayImage, config: &PipelineConfig) -> Result<EdgeResult> {
    config.validate()?;
    let order = band_input_order(&config.rule_base)?;
    let base = config.rule_base.with_aggregation(config.aggregation);
    let filters = config.wavelet.filters();

    // Subtracting the minimum leaves every detail band unchanged in exact
    // arithmetic and makes integer brightness offsets cancel bit-for-bit.
    let floor = img.min();
    let shifted = img.map(|v| v - floor);
    let pyramid = dwt2_multilevel(&shifted, &filters, config.levels)?;

    let mut per_level_maps = Vec::with_capacity(config.levels);
    for bands in &pyramid.levels {
        let e = energize_subbands(bands, config.energy_mode)?;
        let h = config.band_scaling.apply(&e.horiz);
        let v = config.band_scaling.apply(&e.vert);
        let d = config.band_scaling.apply(&e.diag);
        let (w, ht) = h.dimensions();
        let rows: Vec<Vec<f64>> = (0..ht)
            .into_par_iter()
            .map(|y| {
                (0..w)
                    .map(|x| {
                        let mut crisp = [0.0; 3];
                        crisp[order[0]] = h.get(x, y);
                        crisp[order[1]] = v.get(x, y);
                        crisp[order[2]] = d.get(x, y);
                        base.infer_unchecked(&crisp)
                    })
                    .collect()
            })
            .collect();
        per_level_maps.push(GrayImage::new(w, ht, rows.concat())?);
    }

    let (width, height) = img.dimensions();
    let len = filters.len();
    let mut strength = GrayImage::zeros(width, height);
    for (k, map) in per_level_maps.iter().enumerate() {
        let level = k + 1;
        let xs: Vec<usize> = (0..width)
            .map(|x| subband_coord(x, level, len, map.width()))
            .collect();
        for y in 0..height {
            let sy = subband_coord(y, level, len, map.height());
            for (x, &sx) in xs.iter().enumerate() {
                let v = map.get(sx, sy);
                if k == 0 || v > strength.get(x, y) {
                    strength.set(x, y, v);
                }
            }
        }
    }

    let binary = config
        .binary_threshold
        .map(|t| strength.map(|s| if s >= t { 255.0 } else { 0.0 }));
    Ok(EdgeResult {
        strength,
        binary,
        config_echo: config.clone(),
        per_level_maps,
    })
}
