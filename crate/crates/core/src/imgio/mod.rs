//! Grayscale image container, file codecs and intensity normalisation.

mod gray;
pub mod pgm;
mod png_io;

use std::path::Path;

pub use gray::{quantize, GrayImage};
pub use pgm::PgmEncoding;

use crate::error::{Error, Result};

/// Loads a PGM (P2/P5, maxval 255) or 8-bit PNG file, sniffing the format
/// from the file contents. Color PNGs are reduced to luma.
pub fn load_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_image(&bytes)
}

pub fn decode_image(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.starts_with(b"\x89PNG") {
        png_io::decode(bytes)
    } else if bytes.starts_with(b"P2") || bytes.starts_with(b"P5") {
        pgm::decode(bytes)
    } else {
        Err(Error::Format(
            "unrecognised image format (expected PGM or PNG)".into(),
        ))
    }
}

/// Writes `img` clamp-quantized to 8 bits. A `.png` extension selects PNG,
/// anything else is written as raw PGM (P5).
pub fn save_image(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let is_png = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("png"));
    let bytes = if is_png {
        png_io::encode(img)?
    } else {
        pgm::encode(img, PgmEncoding::Raw)
    };
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Writes a PGM with an explicit encoding.
pub fn save_pgm(img: &GrayImage, path: impl AsRef<Path>, encoding: PgmEncoding) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, pgm::encode(img, encoding)).map_err(|e| Error::io(path, e))
}

/// Linear min-max map onto `[0, 255]`; a flat image maps to all zeros.
pub fn rescale_to_byte_range(img: &GrayImage) -> GrayImage {
    let (lo, hi) = (img.min(), img.max());
    if hi == lo {
        return GrayImage::zeros(img.width(), img.height());
    }
    let span = hi - lo;
    // Endpoints are pinned so that float rounding can never leave the range.
    img.map(|v| (255.0 * (v - lo) / span).clamp(0.0, 255.0))
}

/// Root mean square of all pixel values.
pub fn image_rms(img: &GrayImage) -> f64 {
    (img.energy() / img.pixels().len() as f64).sqrt()
}
