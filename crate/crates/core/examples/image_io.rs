// Writes a gradient image as plain PGM, raw PGM and PNG, then reads each back.

use std::error::Error;

use fuzzy_edge::imgio::{load_image, save_image, save_pgm, PgmEncoding};
use fuzzy_edge::GrayImage;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = std::env::temp_dir()
        .join("fuzzy-edge-examples")
        .join("image_io");
    std::fs::create_dir_all(&dir)?;

    let img = GrayImage::from_fn(64, 32, |x, y| ((x * 4 + y * 2) % 256) as f64);
    let plain = dir.join("gradient_plain.pgm");
    let raw = dir.join("gradient_raw.pgm");
    let png = dir.join("gradient.png");
    save_pgm(&img, &plain, PgmEncoding::Plain)?;
    save_pgm(&img, &raw, PgmEncoding::Raw)?;
    save_image(&img, &png)?;

    for path in [&plain, &raw, &png] {
        let back = load_image(path)?;
        let bytes = std::fs::metadata(path)?.len();
        println!(
            "{:<22} {:>6} bytes  {}x{}  mean {:.2}  max diff {}",
            path.file_name().unwrap().to_string_lossy(),
            bytes,
            back.width(),
            back.height(),
            back.mean(),
            back.max_abs_diff(&img)
        );
        if back != img {
            return Err(format!("{} did not round-trip", path.display()).into());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
