// Runs the detector on an image given on the command line, or on a noisy
// synthetic checkerboard, and writes the strength and binary maps.

use std::error::Error;
use std::path::Path;

use fuzzy_edge::dwt::Wavelet;
use fuzzy_edge::eval::{generate, PatternKind, SyntheticSpec};
use fuzzy_edge::imgio::{load_image, save_image};
use fuzzy_edge::{detect_edges, GrayImage, PipelineConfig};

fn detect_and_save(img: &GrayImage, out_dir: &Path) -> Result<(), Box<dyn Error>> {
    std::fs::create_dir_all(out_dir)?;
    for (wavelet, levels) in [
        (Wavelet::Haar, 1),
        (Wavelet::Db2, 1),
        (Wavelet::Db2, 2),
        (Wavelet::Db4, 1),
    ] {
        let config = PipelineConfig {
            wavelet,
            levels,
            ..Default::default()
        };
        let result = detect_edges(img, &config)?;
        let binary = result.binary.as_ref().expect("default config thresholds");
        let stem = format!("{wavelet}_l{levels}");
        save_image(
            &result.strength,
            out_dir.join(format!("{stem}_strength.pgm")),
        )?;
        save_image(binary, out_dir.join(format!("{stem}_edges.pgm")))?;
        println!(
            "{stem:<8} edge pixels {:>5} ({:.1}%)  mean strength {:.1}",
            binary.count_nonzero(),
            100.0 * binary.count_nonzero() as f64 / binary.pixels().len() as f64,
            result.strength.mean()
        );
    }
    println!("maps written to {}", out_dir.display());
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let img = generate(&SyntheticSpec::new(PatternKind::Checker, 96, 96).with_noise(6.0, 3))?.image;
    detect_and_save(
        &img,
        &std::env::temp_dir()
            .join("fuzzy-edge-examples")
            .join("detect"),
    )
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    match std::env::args().nth(1) {
        Some(path) => {
            let img = load_image(&path)?;
            detect_and_save(&img, Path::new("edges_out"))
        }
        None => run_example(),
    }
}
