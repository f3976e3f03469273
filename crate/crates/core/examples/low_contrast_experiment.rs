// Two parallel steps, 0 to 200 and 200 to 200 + delta. Sobel's RMS
// threshold is set by the strong edge and loses the weak one; the fuzzy
// detector with log band scaling keeps both. Linear band scaling is shown
// for contrast.

use std::error::Error;

use fuzzy_edge::baselines::{canny_edges, sobel_edges_rms, CannyConfig, DEFAULT_RMS_SCALE};
use fuzzy_edge::eval::{generate, score, PatternKind, SyntheticSpec, DEFAULT_ALPHA};
use fuzzy_edge::pipeline::BandScaling;
use fuzzy_edge::{detect_edges, GrayImage, PipelineConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("recall on the weak edge / strong edge (tolerance 1 px)");
    println!(
        "{:>5}  {:>13} {:>13} {:>13} {:>13}",
        "delta", "fuzzy log", "fuzzy linear", "sobel-rms", "canny"
    );
    for delta in [4.0, 8.0, 16.0, 32.0, 55.0] {
        let s =
            generate(&SyntheticSpec::new(PatternKind::Lowcontrast, 96, 64).with_contrast(delta))?;
        let linear = PipelineConfig {
            band_scaling: BandScaling::Linear,
            ..Default::default()
        };
        let maps: [GrayImage; 4] = [
            detect_edges(&s.image, &PipelineConfig::default())?
                .binary
                .expect("thresholded"),
            detect_edges(&s.image, &linear)?
                .binary
                .expect("thresholded"),
            sobel_edges_rms(&s.image, DEFAULT_RMS_SCALE)?,
            canny_edges(&s.image, &CannyConfig::default())?,
        ];
        let mut row = format!("{delta:>5}");
        for map in &maps {
            let low = score(map, &s.region_truths["low"], 1, DEFAULT_ALPHA)?.recall;
            let high = score(map, &s.region_truths["high"], 1, DEFAULT_ALPHA)?.recall;
            row += &format!("  {low:>5.2} / {high:>4.2}");
        }
        println!("{row}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
