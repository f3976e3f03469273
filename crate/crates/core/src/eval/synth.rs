use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imgio::{quantize, GrayImage};

/// Background level of the first plateau in the low-contrast pattern.
pub const LOWCONTRAST_BASE: f64 = 200.0;

/// Width in pixels of the linear transition in the ramp pattern.
pub const RAMP_WIDTH: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternKind {
    Step,
    Ramp,
    Bars,
    Lowcontrast,
    Checker,
}

impl PatternKind {
    pub const ALL: [PatternKind; 5] = [
        PatternKind::Step,
        PatternKind::Ramp,
        PatternKind::Bars,
        PatternKind::Lowcontrast,
        PatternKind::Checker,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PatternKind::Step => "step",
            PatternKind::Ramp => "ramp",
            PatternKind::Bars => "bars",
            PatternKind::Lowcontrast => "lowcontrast",
            PatternKind::Checker => "checker",
        }
    }

    /// Contrast used when none is given: full range, or a 16-level step for the low-contrast pattern.
    pub fn default_contrast(self) -> f64 {
        match self {
            PatternKind::Lowcontrast => 16.0,
            _ => 255.0,
        }
    }

    fn max_contrast(self) -> f64 {
        match self {
            PatternKind::Lowcontrast => 255.0 - LOWCONTRAST_BASE,
            _ => 255.0,
        }
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PatternKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PatternKind::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown pattern kind '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[default]
    Vertical,
    Horizontal,
    Diagonal,
}

impl Orientation {
    pub fn name(self) -> &'static str {
        match self {
            Orientation::Vertical => "vertical",
            Orientation::Horizontal => "horizontal",
            Orientation::Diagonal => "diagonal",
        }
    }

    /// Coordinate across the pattern and its extent.
    fn coordinate(self, x: usize, y: usize) -> usize {
        match self {
            Orientation::Vertical => x,
            Orientation::Horizontal => y,
            Orientation::Diagonal => x + y,
        }
    }

    fn extent(self, w: usize, h: usize) -> usize {
        match self {
            Orientation::Vertical => w,
            Orientation::Horizontal => h,
            Orientation::Diagonal => w + h - 1,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vertical" => Ok(Orientation::Vertical),
            "horizontal" => Ok(Orientation::Horizontal),
            "diagonal" => Ok(Orientation::Diagonal),
            _ => Err(Error::InvalidArgument(format!("unknown orientation '{s}'"))),
        }
    }
}

/// Parameters of a synthetic test image with known edges.
///
/// Orientation names the direction of the edges: vertical edges separate columns.
/// The checker pattern ignores orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub kind: PatternKind,
    pub width: usize,
    pub height: usize,
    pub contrast: f64,
    pub orientation: Orientation,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(kind: PatternKind, width: usize, height: usize) -> Self {
        Self {
            kind,
            width,
            height,
            contrast: kind.default_contrast(),
            orientation: Orientation::Vertical,
            noise_sigma: 0.0,
            seed: 0,
        }
    }

    pub fn with_contrast(mut self, contrast: f64) -> Self {
        self.contrast = contrast;
        self
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn with_noise(mut self, sigma: f64, seed: u64) -> Self {
        self.noise_sigma = sigma;
        self.seed = seed;
        self
    }

    /// Side of a bar or checker cell.
    pub fn cell_size(&self) -> usize {
        (self.width.min(self.height) / 4).max(2)
    }

    pub fn validate(&self) -> Result<()> {
        if self.width < 8 || self.height < 8 {
            return Err(Error::Precondition(format!(
                "synthetic images must be at least 8x8, got {}x{}",
                self.width, self.height
            )));
        }
        let max = self.kind.max_contrast();
        if !(self.contrast > 0.0 && self.contrast <= max) {
            return Err(Error::Precondition(format!(
                "{} contrast must be in (0, {max}], got {}",
                self.kind, self.contrast
            )));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(Error::Precondition(format!(
                "noise sigma must be nonnegative, got {}",
                self.noise_sigma
            )));
        }
        Ok(())
    }

    /// Piecewise-constant region label of a pixel; edges lie between differing labels.
    fn label(&self, x: usize, y: usize) -> usize {
        let o = self.orientation;
        let t = o.coordinate(x, y);
        let extent = o.extent(self.width, self.height);
        match self.kind {
            PatternKind::Step | PatternKind::Ramp => usize::from(t >= extent / 2),
            PatternKind::Bars => (t / self.cell_size()) % 2,
            PatternKind::Checker => (x / self.cell_size() + y / self.cell_size()) % 2,
            PatternKind::Lowcontrast => {
                if t < extent / 3 {
                    0
                } else if t < 2 * extent / 3 {
                    1
                } else {
                    2
                }
            }
        }
    }

    fn clean_value(&self, x: usize, y: usize) -> f64 {
        let c = self.contrast;
        match self.kind {
            PatternKind::Ramp => {
                let t = self.orientation.coordinate(x, y) as f64;
                let b = (self.orientation.extent(self.width, self.height) / 2) as f64;
                let half = RAMP_WIDTH as f64 / 2.0;
                // RAMP_WIDTH intermediate levels strictly between 0 and c
                let frac = ((t - (b - half) + 1.0) / (RAMP_WIDTH as f64 + 1.0)).clamp(0.0, 1.0);
                c * frac
            }
            PatternKind::Lowcontrast => match self.label(x, y) {
                0 => 0.0,
                1 => LOWCONTRAST_BASE,
                _ => LOWCONTRAST_BASE + c,
            },
            _ => c * self.label(x, y) as f64,
        }
    }

    /// Pixels with a 4-neighbour whose label pair satisfies `pick`.
    fn boundary(&self, pick: impl Fn(usize, usize) -> bool) -> GrayImage {
        let (w, h) = (self.width, self.height);
        GrayImage::from_fn(w, h, |x, y| {
            let l = self.label(x, y);
            let mut neighbours = [None; 4];
            if x > 0 {
                neighbours[0] = Some(self.label(x - 1, y));
            }
            if x + 1 < w {
                neighbours[1] = Some(self.label(x + 1, y));
            }
            if y > 0 {
                neighbours[2] = Some(self.label(x, y - 1));
            }
            if y + 1 < h {
                neighbours[3] = Some(self.label(x, y + 1));
            }
            let hit = neighbours
                .iter()
                .flatten()
                .any(|&n| n != l && pick(l.min(n), l.max(n)));
            if hit {
                255.0
            } else {
                0.0
            }
        })
    }
}

/// A generated image, its full edge truth, and per-edge truths where the pattern has distinct edges.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticImage {
    pub image: GrayImage,
    pub truth: GrayImage,
    /// For the low-contrast pattern: "high" (0 to 200) and "low" (200 to 200 + contrast).
    pub region_truths: BTreeMap<String, GrayImage>,
}

/// Renders a synthetic pattern. Pixel values are rounded to integers so the
/// in-memory image equals what an 8-bit file would hold.
pub fn generate(spec: &SyntheticSpec) -> Result<SyntheticImage> {
    spec.validate()?;
    let mut image = GrayImage::from_fn(spec.width, spec.height, |x, y| spec.clean_value(x, y));
    if spec.noise_sigma > 0.0 {
        let normal = Normal::new(0.0, spec.noise_sigma)
            .map_err(|e| Error::Precondition(format!("noise distribution: {e}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        for y in 0..spec.height {
            for x in 0..spec.width {
                let v = image.get(x, y) + normal.sample(&mut rng);
                image.set(x, y, v);
            }
        }
    }
    let image = image.map(quantize);
    let truth = spec.boundary(|_, _| true);
    let mut region_truths = BTreeMap::new();
    if spec.kind == PatternKind::Lowcontrast {
        region_truths.insert("high".to_string(), spec.boundary(|a, b| (a, b) == (0, 1)));
        region_truths.insert("low".to_string(), spec.boundary(|a, b| (a, b) == (1, 2)));
    }
    Ok(SyntheticImage {
        image,
        truth,
        region_truths,
    })
}
