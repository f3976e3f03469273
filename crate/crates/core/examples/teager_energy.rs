// The Teager-Kaiser operator on a sinusoid, and the energized detail bands of a step.

use std::error::Error;

use fuzzy_edge::dwt::{dwt2_single_level, Wavelet};
use fuzzy_edge::energy::{energize_subbands, tkeo_1d, EnergyMode};
use fuzzy_edge::eval::{generate, PatternKind, SyntheticSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // For A cos(wn) the operator is constant at A^2 sin^2(w).
    for (amp, omega) in [(1.0, 0.3f64), (10.0, 1.0)] {
        let x: Vec<f64> = (0..16).map(|n| amp * (omega * n as f64).cos()).collect();
        let e = tkeo_1d(&x)?;
        println!(
            "A={amp:<4} w={omega:<4} interior energy {:.6} (expected {:.6})",
            e[8],
            amp * amp * omega.sin().powi(2)
        );
    }

    let step = generate(&SyntheticSpec::new(PatternKind::Step, 16, 8))?.image;
    let bands = dwt2_single_level(&step, &Wavelet::Haar.filters())?;
    for mode in [EnergyMode::Directional, EnergyMode::Isotropic] {
        let e = energize_subbands(&bands, mode)?;
        println!(
            "{mode}: max energy H {:.1}  V {:.1}  D {:.1}",
            e.horiz.max(),
            e.vert.max(),
            e.diag.max()
        );
        println!(
            "  vertical-detail energy, row 3: {:?}",
            e.vert.row(3).iter().map(|v| v.round()).collect::<Vec<_>>()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
