use std::io::Cursor;

use png::{BitDepth, ColorType, Transformations};

use super::gray::{quantize, GrayImage};
use crate::error::{Error, Result};

fn luma(r: u8, g: u8, b: u8) -> f64 {
    (0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b)).round()
}

pub fn decode(bytes: &[u8]) -> Result<GrayImage> {
    let mut decoder = png::Decoder::new(Cursor::new(bytes));
    decoder.set_transformations(Transformations::EXPAND);
    let mut reader = decoder
        .read_info()
        .map_err(|e| Error::Format(format!("png: {e}")))?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::Format("png: image too large".into()))?;
    let mut buf = vec![0u8; size];
    let info = reader
        .next_frame(&mut buf)
        .map_err(|e| Error::Format(format!("png: {e}")))?;
    if info.bit_depth != BitDepth::Eight {
        return Err(Error::Unsupported(format!(
            "png bit depth {:?} (only 8-bit is supported)",
            info.bit_depth
        )));
    }
    let (w, h) = (info.width as usize, info.height as usize);
    let channels = match info.color_type {
        ColorType::Grayscale => 1,
        ColorType::GrayscaleAlpha => 2,
        ColorType::Rgb => 3,
        ColorType::Rgba => 4,
        ColorType::Indexed => return Err(Error::Format("png: palette not expanded".into())),
    };
    let mut pixels = Vec::with_capacity(w * h);
    for line in buf.chunks_exact(info.line_size).take(h) {
        for px in line[..w * channels].chunks_exact(channels) {
            pixels.push(match channels {
                1 | 2 => f64::from(px[0]),
                _ => luma(px[0], px[1], px[2]),
            });
        }
    }
    GrayImage::new(w, h, pixels)
}

pub fn encode(img: &GrayImage) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, img.width() as u32, img.height() as u32);
        encoder.set_color(ColorType::Grayscale);
        encoder.set_depth(BitDepth::Eight);
        let mut writer = encoder
            .write_header()
            .map_err(|e| Error::Format(format!("png: {e}")))?;
        let data: Vec<u8> = img.pixels().iter().map(|&v| quantize(v) as u8).collect();
        writer
            .write_image_data(&data)
            .map_err(|e| Error::Format(format!("png: {e}")))?;
    }
    Ok(out)
}
