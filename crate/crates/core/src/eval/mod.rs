//! Synthetic images with known edges, and scoring of binary edge maps against them.

mod report;
mod score;
mod synth;

pub use report::{EvalReport, MeanScore, ScoreRecord};
pub use score::{
    score, squared_distance_transform, EdgeScore, DEFAULT_ALPHA, DEFAULT_TOLERANCE_PX,
};
pub use synth::{
    generate, Orientation, PatternKind, SyntheticImage, SyntheticSpec, LOWCONTRAST_BASE, RAMP_WIDTH,
};
