// Sweeps pattern, orientation and noise level, scores all three detectors
// and prints the mean scores of the JSON report.

use std::error::Error;

use fuzzy_edge::baselines::{canny_edges, sobel_edges_rms, CannyConfig, DEFAULT_RMS_SCALE};
use fuzzy_edge::eval::{
    generate, score, EvalReport, Orientation, PatternKind, ScoreRecord, SyntheticSpec,
    DEFAULT_ALPHA,
};
use fuzzy_edge::{detect_edges, PipelineConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut records = Vec::new();
    for kind in [
        PatternKind::Step,
        PatternKind::Ramp,
        PatternKind::Bars,
        PatternKind::Checker,
    ] {
        for orientation in [
            Orientation::Vertical,
            Orientation::Horizontal,
            Orientation::Diagonal,
        ] {
            for (i, noise) in [0.0, 8.0, 16.0].into_iter().enumerate() {
                let spec = SyntheticSpec::new(kind, 48, 48)
                    .with_orientation(orientation)
                    .with_noise(noise, i as u64);
                let s = generate(&spec)?;
                let proposed = detect_edges(&s.image, &PipelineConfig::default())?
                    .binary
                    .expect("thresholded");
                let maps = [
                    ("proposed", proposed),
                    ("sobel", sobel_edges_rms(&s.image, DEFAULT_RMS_SCALE)?),
                    ("canny", canny_edges(&s.image, &CannyConfig::default())?),
                ];
                for (name, map) in maps {
                    records.push(ScoreRecord {
                        image: format!("{kind}-{orientation}-n{noise}"),
                        spec: Some(spec),
                        detector: name.to_string(),
                        region: None,
                        score: score(&map, &s.truth, 1, DEFAULT_ALPHA)?,
                    });
                }
            }
        }
    }
    let report = EvalReport::from_records(records);
    println!("{} records", report.records.len());
    for m in &report.means {
        println!(
            "{:<9} precision {:.3}  recall {:.3}  f1 {:.3}  fom {:.3}",
            m.detector, m.precision, m.recall, m.f1, m.pratt_fom
        );
    }
    let path = std::env::temp_dir()
        .join("fuzzy-edge-examples")
        .join("benchmark.json");
    std::fs::create_dir_all(path.parent().unwrap())?;
    std::fs::write(&path, report.to_json())?;
    println!("report written to {}", path.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
