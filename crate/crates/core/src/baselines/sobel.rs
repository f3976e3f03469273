use crate::error::{Error, Result};
use crate::imgio::{image_rms, GrayImage};

/// Horizontal and vertical Sobel responses plus their magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct SobelGradient {
    pub gx: GrayImage,
    pub gy: GrayImage,
    pub magnitude: GrayImage,
}

pub const DEFAULT_RMS_SCALE: f64 = 4.0;

/// 3x3 Sobel correlation with replicated borders.
///
/// `gx` uses `[-1 0 1; -2 0 2; -1 0 1]` and `gy` its transpose.
pub fn sobel_gradient(img: &GrayImage) -> Result<SobelGradient> {
    let (w, h) = img.dimensions();
    if w < 3 || h < 3 {
        return Err(Error::Precondition(format!(
            "Sobel needs at least 3x3, got {w}x{h}"
        )));
    }
    let p = |x: usize, y: usize, dx: isize, dy: isize| {
        img.get_clamped(x as isize + dx, y as isize + dy)
    };
    let gx = GrayImage::from_fn(w, h, |x, y| {
        (p(x, y, 1, -1) - p(x, y, -1, -1))
            + 2.0 * (p(x, y, 1, 0) - p(x, y, -1, 0))
            + (p(x, y, 1, 1) - p(x, y, -1, 1))
    });
    let gy = GrayImage::from_fn(w, h, |x, y| {
        (p(x, y, -1, 1) - p(x, y, -1, -1))
            + 2.0 * (p(x, y, 0, 1) - p(x, y, 0, -1))
            + (p(x, y, 1, 1) - p(x, y, 1, -1))
    });
    let magnitude = gx.zip_map(&gy, |a, b| (a * a + b * b).sqrt())?;
    Ok(SobelGradient { gx, gy, magnitude })
}

/// Binary Sobel edges with threshold `scale × RMS(magnitude)`.
///
/// A pixel is an edge when its magnitude reaches the threshold and is
/// nonzero, so a flat image has no edges even though its threshold is 0.
pub fn sobel_edges_rms(img: &GrayImage, scale: f64) -> Result<GrayImage> {
    if !(scale.is_finite() && scale >= 0.0) {
        return Err(Error::Precondition(format!(
            "RMS scale must be nonnegative, got {scale}"
        )));
    }
    let g = sobel_gradient(img)?;
    let threshold = scale * image_rms(&g.magnitude);
    Ok(g.magnitude.map(|m| {
        if m > 0.0 && m >= threshold {
            255.0
        } else {
            0.0
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(w: usize, h: usize, at: usize, lo: f64, hi: f64) -> GrayImage {
        GrayImage::from_fn(w, h, |x, _| if x < at { lo } else { hi })
    }

    #[test]
    fn constant_image() {
        let g = sobel_gradient(&GrayImage::filled(5, 4, 80.0)).unwrap();
        assert_eq!(g.magnitude.count_nonzero(), 0);
        assert_eq!(
            sobel_edges_rms(&GrayImage::filled(5, 4, 80.0), 4.0)
                .unwrap()
                .count_nonzero(),
            0
        );
    }

    #[test]
    fn vertical_step_response() {
        let g = sobel_gradient(&step(8, 8, 4, 0.0, 255.0)).unwrap();
        assert_eq!(g.gy.count_nonzero(), 0);
        for y in 0..8 {
            for x in 0..8 {
                let want = if x == 3 || x == 4 { 1020.0 } else { 0.0 };
                assert_eq!(g.gx.get(x, y), want);
            }
        }
    }

    #[test]
    fn transpose_swaps_components() {
        let img = GrayImage::from_fn(7, 5, |x, y| ((x * 31 + y * 17) % 23) as f64);
        let a = sobel_gradient(&img).unwrap();
        let b = sobel_gradient(&img.transpose()).unwrap();
        assert_eq!(b.gx, a.gy.transpose());
        assert_eq!(b.gy, a.gx.transpose());
    }

    #[test]
    fn strong_step_needs_a_mostly_flat_image() {
        // Two edge columns of magnitude M out of W give 4 x RMS = 4M sqrt(2/W),
        // which only drops below M once W >= 32.
        let e = sobel_edges_rms(&step(8, 8, 4, 0.0, 255.0), 4.0).unwrap();
        assert_eq!(e.count_nonzero(), 0);
        let e = sobel_edges_rms(&step(8, 8, 4, 0.0, 255.0), 1.5).unwrap();
        assert_eq!(e.count_nonzero(), 16);
        let e = sobel_edges_rms(&step(64, 8, 32, 0.0, 255.0), 4.0).unwrap();
        for x in 0..64 {
            assert_eq!(e.get(x, 0) == 255.0, x == 31 || x == 32);
        }
    }

    #[test]
    fn weak_step_missed_next_to_strong_one() {
        // 0 | 200 | 216 on a 64-wide image: magnitudes 800 and 64
        let img = GrayImage::from_fn(64, 16, |x, _| match x {
            0..=20 => 0.0,
            21..=41 => 200.0,
            _ => 216.0,
        });
        let g = sobel_gradient(&img).unwrap();
        let threshold = 4.0 * image_rms(&g.magnitude);
        assert!(threshold > 64.0 && threshold < 800.0, "{threshold}");
        let e = sobel_edges_rms(&img, 4.0).unwrap();
        assert_eq!(e.get(20, 3), 255.0);
        assert_eq!(e.get(21, 3), 255.0);
        assert_eq!(e.get(41, 3), 0.0);
        assert_eq!(e.get(42, 3), 0.0);
    }

    #[test]
    fn brightness_shift_invariance() {
        let img = GrayImage::from_fn(9, 7, |x, y| ((x * 37 + y * 11) % 200) as f64);
        let a = sobel_gradient(&img).unwrap();
        let b = sobel_gradient(&img.map(|v| v + 41.0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn too_small() {
        assert!(sobel_gradient(&GrayImage::zeros(2, 5)).is_err());
    }
}
