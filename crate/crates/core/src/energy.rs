//! Teager-Kaiser energy operator applied to wavelet detail bands.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dwt::SubbandSet;
use crate::error::{Error, Result};
use crate::imgio::GrayImage;

/// `T[f](n) = f(n)² - f(n+1)·f(n-1)` at interior samples; both end samples are 0.
pub fn tkeo_1d(signal: &[f64]) -> Result<Vec<f64>> {
    if signal.len() < 3 {
        return Err(Error::Precondition(format!(
            "energy operator needs at least 3 samples, got {}",
            signal.len()
        )));
    }
    let mut out = vec![0.0; signal.len()];
    tkeo_into(signal, &mut out);
    Ok(out)
}

fn tkeo_into(signal: &[f64], out: &mut [f64]) {
    let n = signal.len();
    out[0] = 0.0;
    out[n - 1] = 0.0;
    for (o, w) in out[1..n - 1].iter_mut().zip(signal.windows(3)) {
        *o = w[1] * w[1] - w[2] * w[0];
    }
}

/// Row-wise TKEO over a whole grid.
fn tkeo_rows(img: &GrayImage) -> GrayImage {
    let mut out = vec![0.0; img.pixels().len()];
    for (row, o) in img.rows().zip(out.chunks_exact_mut(img.width())) {
        tkeo_into(row, o);
    }
    GrayImage::new(img.width(), img.height(), out).expect("same shape")
}

fn tkeo_cols(img: &GrayImage) -> GrayImage {
    tkeo_rows(&img.transpose()).transpose()
}

fn tkeo_mean(img: &GrayImage) -> GrayImage {
    tkeo_rows(img)
        .zip_map(&tkeo_cols(img), |r, c| (r + c) * 0.5)
        .expect("same shape")
}

/// How the 1D operator is extended to the 2D detail bands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnergyMode {
    /// Across each band's edge profile: columns of the horizontal band,
    /// rows of the vertical band, mean of both for the diagonal band.
    #[default]
    Directional,
    /// Mean of row-wise and column-wise energy for every band.
    Isotropic,
}

impl fmt::Display for EnergyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnergyMode::Directional => "directional",
            EnergyMode::Isotropic => "isotropic",
        })
    }
}

impl FromStr for EnergyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "directional" => Ok(EnergyMode::Directional),
            "isotropic" => Ok(EnergyMode::Isotropic),
            other => Err(Error::InvalidArgument(format!(
                "unknown energy mode '{other}' (expected directional or isotropic)"
            ))),
        }
    }
}

/// Nonnegative energy maps for one level's detail bands.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergizedSubbands {
    pub level: usize,
    pub horiz: GrayImage,
    pub vert: GrayImage,
    pub diag: GrayImage,
}

pub fn energize_subbands(bands: &SubbandSet, mode: EnergyMode) -> Result<EnergizedSubbands> {
    let (w, h) = bands.horiz_detail.dimensions();
    // Directional mode only needs length 3 along the processed axis, but the
    // diagonal band always uses both axes.
    if w < 3 || h < 3 {
        return Err(Error::Precondition(format!(
            "level {}: subband {w}x{h} too small for the energy operator (needs 3x3)",
            bands.level
        )));
    }
    let (horiz, vert) = match mode {
        EnergyMode::Directional => (
            tkeo_cols(&bands.horiz_detail),
            tkeo_rows(&bands.vert_detail),
        ),
        EnergyMode::Isotropic => (
            tkeo_mean(&bands.horiz_detail),
            tkeo_mean(&bands.vert_detail),
        ),
    };
    let diag = tkeo_mean(&bands.diag_detail);
    Ok(EnergizedSubbands {
        level: bands.level,
        horiz: horiz.map(f64::abs),
        vert: vert.map(f64::abs),
        diag: diag.map(f64::abs),
    })
}
