// Scores the proposed detector, Sobel with an RMS threshold and Canny on
// synthetic patterns with and without noise.

use std::error::Error;

use fuzzy_edge::baselines::{canny_edges, sobel_edges_rms, CannyConfig, DEFAULT_RMS_SCALE};
use fuzzy_edge::eval::{generate, score, Orientation, PatternKind, SyntheticSpec, DEFAULT_ALPHA};
use fuzzy_edge::{detect_edges, PipelineConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!(
        "{:<28} {:<9} {:>6} {:>6} {:>6} {:>6}",
        "image", "detector", "prec", "recall", "f1", "fom"
    );
    let cases = [
        SyntheticSpec::new(PatternKind::Step, 64, 64),
        SyntheticSpec::new(PatternKind::Ramp, 64, 64).with_orientation(Orientation::Horizontal),
        SyntheticSpec::new(PatternKind::Bars, 64, 64).with_contrast(120.0),
        SyntheticSpec::new(PatternKind::Checker, 64, 64).with_noise(10.0, 7),
        SyntheticSpec::new(PatternKind::Step, 64, 64)
            .with_orientation(Orientation::Diagonal)
            .with_noise(20.0, 8),
    ];
    for spec in cases {
        let s = generate(&spec)?;
        let proposed = detect_edges(&s.image, &PipelineConfig::default())?
            .binary
            .expect("thresholded");
        let maps = [
            ("proposed", proposed),
            ("sobel", sobel_edges_rms(&s.image, DEFAULT_RMS_SCALE)?),
            ("canny", canny_edges(&s.image, &CannyConfig::default())?),
        ];
        let label = format!(
            "{} {} noise {}",
            spec.kind, spec.orientation, spec.noise_sigma
        );
        for (name, map) in &maps {
            let sc = score(map, &s.truth, 1, DEFAULT_ALPHA)?;
            println!(
                "{label:<28} {name:<9} {:>6.3} {:>6.3} {:>6.3} {:>6.3}",
                sc.precision, sc.recall, sc.f1, sc.pratt_fom
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
