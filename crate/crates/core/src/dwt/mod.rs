//! Separable 2D discrete wavelet transform.
//!
//! Rows are filtered first, then columns (and the transposed order, averaged,
//! for exact transpose symmetry). Each level splits an image into an
//! approximation (LL) and three detail bands. Naming: `horiz_detail` is
//! row-lowpass/column-highpass (LH) and responds to horizontal edges;
//! `vert_detail` (HL) responds to vertical edges; `diag_detail` is HH.

mod dump;
mod filters;
mod transform;

use serde::{Deserialize, Serialize};

pub use dump::{dump_pyramid, PyramidManifest};
pub use filters::{Wavelet, WaveletFilterPair};
pub use transform::{
    analyze_1d, analyze_1d_with, band_len, synthesize_1d, synthesize_1d_with, Extension,
};

use crate::error::{Error, Result};
use crate::imgio::GrayImage;
use transform::{forward_2d, inverse_2d, Grid};

/// One decomposition level.
#[derive(Debug, Clone, PartialEq)]
pub struct SubbandSet {
    pub level: usize,
    pub approx: GrayImage,
    pub horiz_detail: GrayImage,
    pub vert_detail: GrayImage,
    pub diag_detail: GrayImage,
}

impl SubbandSet {
    pub fn dimensions(&self) -> (usize, usize) {
        self.approx.dimensions()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionPyramid {
    /// Level 1 (finest) first.
    pub levels: Vec<SubbandSet>,
    pub final_approx: GrayImage,
    pub wavelet: Wavelet,
    pub extension: Extension,
    pub original_size: (usize, usize),
}

impl DecompositionPyramid {
    /// Sizes of the image fed into each level, finest first.
    pub fn parent_sizes(&self) -> Vec<(usize, usize)> {
        std::iter::once(self.original_size)
            .chain(self.levels.iter().map(SubbandSet::dimensions))
            .take(self.levels.len())
            .collect()
    }
}

fn to_grid(img: &GrayImage) -> Grid {
    Grid::new(img.width(), img.height(), img.pixels().to_vec())
}

fn to_image(g: Grid) -> GrayImage {
    GrayImage::from_raw(g.w, g.h, g.data)
}

fn check_level_input(
    w: usize,
    h: usize,
    f: &WaveletFilterPair,
    ext: Extension,
    level: usize,
) -> Result<()> {
    if w < 2 || h < 2 {
        return Err(Error::Precondition(format!(
            "level {level}: image {w}x{h} is smaller than 2x2"
        )));
    }
    if ext == Extension::Periodic && (!w.is_multiple_of(2) || !h.is_multiple_of(2)) {
        return Err(Error::Precondition(format!(
            "level {level}: periodic extension needs even dimensions, got {w}x{h}"
        )));
    }
    if level > 1 && w.min(h) <= f.len() {
        return Err(Error::Precondition(format!(
            "level {level}: approximation {w}x{h} does not exceed the {}-tap {} filter",
            f.len(),
            f.wavelet
        )));
    }
    Ok(())
}

/// Subband dimensions produced from a `w x h` parent.
pub fn subband_size(w: usize, h: usize, filter_len: usize, ext: Extension) -> (usize, usize) {
    (band_len(w, filter_len, ext), band_len(h, filter_len, ext))
}

pub fn dwt2_single_level(img: &GrayImage, filters: &WaveletFilterPair) -> Result<SubbandSet> {
    dwt2_single_level_with(img, filters, Extension::Symmetric)
}

pub fn dwt2_single_level_with(
    img: &GrayImage,
    filters: &WaveletFilterPair,
    ext: Extension,
) -> Result<SubbandSet> {
    check_level_input(img.width(), img.height(), filters, ext, 1)?;
    Ok(single(img, filters, ext, 1))
}

fn single(img: &GrayImage, f: &WaveletFilterPair, ext: Extension, level: usize) -> SubbandSet {
    let [ll, lh, hl, hh] = forward_2d(&to_grid(img), f, ext);
    SubbandSet {
        level,
        approx: to_image(ll),
        horiz_detail: to_image(lh),
        vert_detail: to_image(hl),
        diag_detail: to_image(hh),
    }
}

/// Largest level count accepted by [`dwt2_multilevel`] for this image.
pub fn max_levels(width: usize, height: usize, wavelet: Wavelet) -> usize {
    let len = wavelet.filters().len();
    let (mut w, mut h) = (width, height);
    if w < 2 || h < 2 {
        return 0;
    }
    let mut levels = 0;
    while levels == 0 || w.min(h) > len {
        levels += 1;
        (w, h) = subband_size(w, h, len, Extension::Symmetric);
    }
    levels
}

pub fn dwt2_multilevel(
    img: &GrayImage,
    filters: &WaveletFilterPair,
    levels: usize,
) -> Result<DecompositionPyramid> {
    dwt2_multilevel_with(img, filters, levels, Extension::Symmetric)
}

pub fn dwt2_multilevel_with(
    img: &GrayImage,
    filters: &WaveletFilterPair,
    levels: usize,
    ext: Extension,
) -> Result<DecompositionPyramid> {
    if levels == 0 {
        return Err(Error::Precondition("levels must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(levels);
    let mut current = img.clone();
    for level in 1..=levels {
        check_level_input(current.width(), current.height(), filters, ext, level)?;
        let bands = single(&current, filters, ext, level);
        current = bands.approx.clone();
        out.push(bands);
    }
    Ok(DecompositionPyramid {
        levels: out,
        final_approx: current,
        wavelet: filters.wavelet,
        extension: ext,
        original_size: img.dimensions(),
    })
}

/// Reconstructs the image from the final approximation and every level's
/// detail bands. Intermediate `approx` fields are not read.
pub fn idwt2(pyramid: &DecompositionPyramid, filters: &WaveletFilterPair) -> Result<GrayImage> {
    if pyramid.levels.is_empty() {
        return Err(Error::Precondition("pyramid has no levels".into()));
    }
    if filters.wavelet != pyramid.wavelet {
        return Err(Error::InvalidArgument(format!(
            "pyramid built with {} but {} filters supplied",
            pyramid.wavelet, filters.wavelet
        )));
    }
    let ext = pyramid.extension;
    let parents = pyramid.parent_sizes();
    for (bands, &(pw, ph)) in pyramid.levels.iter().zip(&parents) {
        let want = subband_size(pw, ph, filters.len(), ext);
        let dims = [
            bands.approx.dimensions(),
            bands.horiz_detail.dimensions(),
            bands.vert_detail.dimensions(),
            bands.diag_detail.dimensions(),
        ];
        if dims.iter().any(|&d| d != want) {
            return Err(Error::DimensionMismatch(format!(
                "level {}: subbands {dims:?} do not match parent {pw}x{ph} (expected {want:?})",
                bands.level
            )));
        }
    }
    let last = pyramid.levels.last().expect("nonempty");
    if pyramid.final_approx.dimensions() != last.dimensions() {
        return Err(Error::DimensionMismatch("final approximation size".into()));
    }

    let mut current = pyramid.final_approx.clone();
    for (bands, &(pw, ph)) in pyramid.levels.iter().zip(&parents).rev() {
        let quad = [
            to_grid(&current),
            to_grid(&bands.horiz_detail),
            to_grid(&bands.vert_detail),
            to_grid(&bands.diag_detail),
        ];
        current = to_image(inverse_2d(&quad, filters, ext, pw, ph));
    }
    Ok(current)
}

/// Serializable summary of a pyramid's shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelShape {
    pub level: usize,
    pub width: usize,
    pub height: usize,
}
