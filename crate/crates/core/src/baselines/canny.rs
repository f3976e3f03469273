use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::sobel::sobel_gradient;
use crate::error::{Error, Result};
use crate::imgio::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CannyConfig {
    pub gaussian_sigma: f64,
    /// Low threshold as a fraction of the high threshold.
    pub low_ratio: f64,
    /// Percentile of the nonzero gradient magnitudes used as the high threshold.
    pub high_percentile: f64,
}

impl Default for CannyConfig {
    fn default() -> Self {
        Self {
            gaussian_sigma: 1.4,
            low_ratio: 0.4,
            high_percentile: 90.0,
        }
    }
}

impl CannyConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gaussian_sigma.is_finite() && self.gaussian_sigma > 0.0) {
            return Err(Error::Precondition(format!(
                "Canny sigma must be positive, got {}",
                self.gaussian_sigma
            )));
        }
        if !(self.low_ratio > 0.0 && self.low_ratio < 1.0) {
            return Err(Error::Precondition(format!(
                "Canny low ratio must be in (0, 1), got {}",
                self.low_ratio
            )));
        }
        if !(self.high_percentile > 0.0 && self.high_percentile < 100.0) {
            return Err(Error::Precondition(format!(
                "Canny high percentile must be in (0, 100), got {}",
                self.high_percentile
            )));
        }
        Ok(())
    }

    pub fn kernel_radius(&self) -> usize {
        (3.0 * self.gaussian_sigma).ceil() as usize
    }
}

fn gaussian_kernel(sigma: f64, radius: usize) -> Vec<f64> {
    let r = radius as isize;
    let k: Vec<f64> = (-r..=r)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    k.into_iter().map(|v| v / sum).collect()
}

/// Separable Gaussian blur with replicated borders.
pub fn gaussian_blur(img: &GrayImage, sigma: f64) -> GrayImage {
    let radius = (3.0 * sigma).ceil() as usize;
    let k = gaussian_kernel(sigma, radius);
    let r = radius as isize;
    let horiz = GrayImage::from_fn(img.width(), img.height(), |x, y| {
        k.iter()
            .enumerate()
            .map(|(i, w)| w * img.get_clamped(x as isize + i as isize - r, y as isize))
            .sum()
    });
    GrayImage::from_fn(img.width(), img.height(), |x, y| {
        k.iter()
            .enumerate()
            .map(|(i, w)| w * horiz.get_clamped(x as isize, y as isize + i as isize - r))
            .sum()
    })
}

/// Linear-interpolated percentile of an ascending slice.
fn percentile(sorted: &[f64], pct: f64) -> f64 {
    let pos = pct / 100.0 * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Unit step along the quantised gradient direction (y grows downwards).
fn direction_step(gx: f64, gy: f64) -> (isize, isize) {
    let mut angle = gy.atan2(gx).to_degrees();
    if angle < 0.0 {
        angle += 180.0;
    }
    if !(22.5..157.5).contains(&angle) {
        (1, 0)
    } else if angle < 67.5 {
        (1, 1)
    } else if angle < 112.5 {
        (0, 1)
    } else {
        (-1, 1)
    }
}

/// Non-maximum suppression. A pixel survives when it is `>=` the neighbour
/// behind it and `>` the neighbour ahead of it along the gradient, so a
/// plateau of two equal maxima keeps exactly one pixel.
fn non_maximum_suppression(gx: &GrayImage, gy: &GrayImage, mag: &GrayImage) -> GrayImage {
    let (w, h) = mag.dimensions();
    let at = |x: isize, y: isize| {
        if x < 0 || y < 0 || x >= w as isize || y >= h as isize {
            0.0
        } else {
            mag.get(x as usize, y as usize)
        }
    };
    GrayImage::from_fn(w, h, |x, y| {
        let m = mag.get(x, y);
        if m <= 0.0 {
            return 0.0;
        }
        let (dx, dy) = direction_step(gx.get(x, y), gy.get(x, y));
        let (xi, yi) = (x as isize, y as isize);
        if m >= at(xi - dx, yi - dy) && m > at(xi + dx, yi + dy) {
            m
        } else {
            0.0
        }
    })
}

/// Resolved (low, high) thresholds, or `None` when the gradient is zero everywhere.
pub fn canny_thresholds(magnitude: &GrayImage, config: &CannyConfig) -> Option<(f64, f64)> {
    let mut nz: Vec<f64> = magnitude
        .pixels()
        .iter()
        .copied()
        .filter(|&m| m > 0.0)
        .collect();
    if nz.is_empty() {
        return None;
    }
    nz.sort_by(f64::total_cmp);
    let high = percentile(&nz, config.high_percentile);
    Some((config.low_ratio * high, high))
}

pub fn canny_edges(img: &GrayImage, config: &CannyConfig) -> Result<GrayImage> {
    config.validate()?;
    let (w, h) = img.dimensions();
    if w < 5 || h < 5 {
        return Err(Error::Precondition(format!(
            "Canny needs at least 5x5, got {w}x{h}"
        )));
    }
    let smooth = gaussian_blur(img, config.gaussian_sigma);
    let g = sobel_gradient(&smooth)?;
    let Some((low, high)) = canny_thresholds(&g.magnitude, config) else {
        return Ok(GrayImage::zeros(w, h));
    };
    let thin = non_maximum_suppression(&g.gx, &g.gy, &g.magnitude);

    let mut out = GrayImage::zeros(w, h);
    let mut queue = VecDeque::new();
    for y in 0..h {
        for x in 0..w {
            if thin.get(x, y) >= high {
                out.set(x, y, 255.0);
                queue.push_back((x, y));
            }
        }
    }
    while let Some((x, y)) = queue.pop_front() {
        for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
            for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                if out.get(nx, ny) == 0.0 && thin.get(nx, ny) >= low && thin.get(nx, ny) > 0.0 {
                    out.set(nx, ny, 255.0);
                    queue.push_back((nx, ny));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_image_has_no_edges() {
        let e = canny_edges(&GrayImage::filled(12, 12, 99.0), &CannyConfig::default()).unwrap();
        assert_eq!(e.count_nonzero(), 0);
    }

    #[test]
    fn vertical_step_is_thin_and_localised() {
        let img = GrayImage::from_fn(32, 32, |x, _| if x < 16 { 0.0 } else { 255.0 });
        let e = canny_edges(&img, &CannyConfig::default()).unwrap();
        for y in 0..32 {
            let cols: Vec<usize> = (0..32).filter(|&x| e.get(x, y) == 255.0).collect();
            assert_eq!(cols.len(), 1, "row {y}: {cols:?}");
            assert!(cols[0] == 15 || cols[0] == 16);
        }
    }

    #[test]
    fn horizontal_step_is_thin() {
        let img = GrayImage::from_fn(20, 21, |_, y| if y < 9 { 30.0 } else { 140.0 });
        let e = canny_edges(&img, &CannyConfig::default()).unwrap();
        for x in 0..20 {
            let rows: Vec<usize> = (0..21).filter(|&y| e.get(x, y) == 255.0).collect();
            assert_eq!(rows.len(), 1);
            assert!(rows[0] == 8 || rows[0] == 9);
        }
    }

    #[test]
    fn blur_preserves_constants() {
        let b = gaussian_blur(&GrayImage::filled(6, 6, 7.0), 1.4);
        assert!(b.pixels().iter().all(|v| (v - 7.0).abs() < 1e-12));
    }

    #[test]
    fn percentile_interpolates() {
        assert_eq!(percentile(&[1.0, 2.0, 3.0, 4.0, 5.0], 50.0), 3.0);
        assert!((percentile(&[0.0, 10.0], 90.0) - 9.0).abs() < 1e-12);
    }

    #[test]
    fn config_errors() {
        let img = GrayImage::zeros(8, 8);
        for c in [
            CannyConfig {
                gaussian_sigma: 0.0,
                ..Default::default()
            },
            CannyConfig {
                low_ratio: 1.0,
                ..Default::default()
            },
            CannyConfig {
                high_percentile: 100.0,
                ..Default::default()
            },
        ] {
            assert!(canny_edges(&img, &c).is_err());
        }
        assert!(canny_edges(&GrayImage::zeros(4, 9), &CannyConfig::default()).is_err());
    }
}
