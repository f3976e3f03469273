//! Netpbm graymap codec (P2 plain and P5 raw, maxval 255 only).

use std::io::Write;

use super::gray::{quantize, GrayImage};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmEncoding {
    /// P2, ASCII samples.
    Plain,
    /// P5, one byte per sample.
    Raw,
}

struct Header {
    encoding: PgmEncoding,
    width: usize,
    height: usize,
    /// Offset of the first byte after the single whitespace that ends the header.
    data_start: usize,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn read_uint(&mut self, what: &str) -> Result<usize> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Format(format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Format(format!("{what} out of range")))
    }
}

fn parse_header(bytes: &[u8]) -> Result<Header> {
    let encoding = match bytes.get(..2) {
        Some(b"P2") => PgmEncoding::Plain,
        Some(b"P5") => PgmEncoding::Raw,
        _ => return Err(Error::Format("not a P2/P5 graymap".into())),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    let width = cur.read_uint("width")?;
    let height = cur.read_uint("height")?;
    let maxval = cur.read_uint("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::Format(format!("zero dimension {width}x{height}")));
    }
    if maxval != 255 {
        return Err(Error::Unsupported(format!(
            "maxval {maxval} (only 8-bit maxval 255 is supported)"
        )));
    }
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => {}
        _ => return Err(Error::Format("header not terminated by whitespace".into())),
    }
    Ok(Header {
        encoding,
        width,
        height,
        data_start: cur.pos + 1,
    })
}

pub fn decode(bytes: &[u8]) -> Result<GrayImage> {
    let header = parse_header(bytes)?;
    let n = header
        .width
        .checked_mul(header.height)
        .ok_or_else(|| Error::Format("dimensions overflow".into()))?;
    let pixels = match header.encoding {
        PgmEncoding::Raw => {
            let data = bytes
                .get(header.data_start..header.data_start + n)
                .ok_or_else(|| Error::Format("truncated raster".into()))?;
            data.iter().map(|&b| f64::from(b)).collect()
        }
        PgmEncoding::Plain => {
            let mut cur = Cursor {
                bytes,
                pos: header.data_start,
            };
            let mut pixels = Vec::with_capacity(n);
            for _ in 0..n {
                let v = cur.read_uint("sample")?;
                if v > 255 {
                    return Err(Error::Format(format!("sample {v} exceeds maxval")));
                }
                pixels.push(v as f64);
            }
            pixels
        }
    };
    GrayImage::new(header.width, header.height, pixels)
}

pub fn encode(img: &GrayImage, encoding: PgmEncoding) -> Vec<u8> {
    let (w, h) = img.dimensions();
    let magic = match encoding {
        PgmEncoding::Plain => "P2",
        PgmEncoding::Raw => "P5",
    };
    let mut out = format!("{magic}\n{w} {h}\n255\n").into_bytes();
    match encoding {
        PgmEncoding::Raw => out.extend(img.pixels().iter().map(|&v| quantize(v) as u8)),
        PgmEncoding::Plain => {
            for row in img.rows() {
                let line: Vec<String> = row
                    .iter()
                    .map(|&v| (quantize(v) as u8).to_string())
                    .collect();
                // Netpbm asks for lines of at most 70 characters; wrap at 16 samples.
                for chunk in line.chunks(16) {
                    writeln!(out, "{}", chunk.join(" ")).expect("write to Vec");
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p5_bytes_map_directly() {
        let mut file = b"P5\n2 2\n255\n".to_vec();
        file.extend([0u8, 128, 255, 64]);
        let img = decode(&file).unwrap();
        assert_eq!(img.dimensions(), (2, 2));
        assert_eq!(img.pixels(), &[0.0, 128.0, 255.0, 64.0]);
    }

    #[test]
    fn p2_matches_p5() {
        let mut p5 = b"P5\n2 2\n255\n".to_vec();
        p5.extend([0u8, 128, 255, 64]);
        let p2 = b"P2\n# a comment\n2 2\n255\n0 128\n255 64\n";
        assert_eq!(decode(&p5).unwrap(), decode(p2).unwrap());
    }

    #[test]
    fn rejects_16_bit_maxval() {
        let file = b"P2\n1 1\n65535\n1000\n";
        assert!(matches!(decode(file), Err(Error::Unsupported(_))));
    }

    #[test]
    fn rejects_truncated_and_garbage() {
        assert!(matches!(
            decode(b"P5\n2 2\n255\n\x00\x01"),
            Err(Error::Format(_))
        ));
        assert!(matches!(
            decode(b"P6\n1 1\n255\n\x00\x00\x00"),
            Err(Error::Format(_))
        ));
        assert!(matches!(decode(b"P2\n2 1\n255\n3"), Err(Error::Format(_))));
        assert!(matches!(
            decode(b"P2\n1 1\n255\n300\n"),
            Err(Error::Format(_))
        ));
        assert!(matches!(decode(b"P2\n0 1\n255\n"), Err(Error::Format(_))));
    }

    #[test]
    fn raw_sample_equal_to_whitespace_byte() {
        // A raster byte of 0x0A directly after the header must not be eaten as whitespace.
        let mut file = b"P5 1 2 255\n".to_vec();
        file.extend([10u8, 32]);
        assert_eq!(decode(&file).unwrap().pixels(), &[10.0, 32.0]);
    }

    #[test]
    fn plain_encoding_round_trips() {
        let img = GrayImage::from_fn(37, 3, |x, y| ((x * 7 + y * 31) % 256) as f64);
        let bytes = encode(&img, PgmEncoding::Plain);
        assert!(bytes.split(|&b| b == b'\n').all(|l| l.len() <= 70));
        assert_eq!(decode(&bytes).unwrap(), img);
    }
}
