// Multilevel 2D decomposition with each wavelet: subband sizes, detail
// energy per level and reconstruction error. The db2 pyramid is dumped to disk.

use std::error::Error;

use fuzzy_edge::dwt::{dump_pyramid, dwt2_multilevel, idwt2, max_levels, Wavelet};
use fuzzy_edge::eval::{generate, PatternKind, SyntheticSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let img = generate(&SyntheticSpec::new(PatternKind::Checker, 64, 48).with_noise(4.0, 1))?.image;
    for w in Wavelet::ALL {
        let filters = w.filters();
        let levels = max_levels(img.width(), img.height(), w).min(3);
        let pyramid = dwt2_multilevel(&img, &filters, levels)?;
        let back = idwt2(&pyramid, &filters)?;
        println!(
            "{w} ({} taps), {levels} levels, reconstruction error {:.2e}",
            filters.len(),
            back.max_abs_diff(&img)
        );
        for bands in &pyramid.levels {
            let (bw, bh) = bands.horiz_detail.dimensions();
            println!(
                "  level {}: {bw}x{bh}  energy H {:>11.1}  V {:>11.1}  D {:>11.1}",
                bands.level,
                bands.horiz_detail.energy(),
                bands.vert_detail.energy(),
                bands.diag_detail.energy()
            );
        }
        if w == Wavelet::Db2 {
            let dir = std::env::temp_dir()
                .join("fuzzy-edge-examples")
                .join("pyramid");
            dump_pyramid(&pyramid, &dir)?;
            println!("  dumped to {}", dir.display());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
