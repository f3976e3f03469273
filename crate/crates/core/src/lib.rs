//! Edge detection by fuzzy inference over wavelet subband energies.
//!
//! The pipeline decomposes a grayscale image with a 2D discrete wavelet
//! transform, measures Teager-Kaiser energy in each detail subband, and
//! feeds the three band energies of every pixel to a Mamdani fuzzy
//! inference system whose crisp output is the edge strength.
//! Sobel and Canny detectors plus a synthetic benchmark harness are
//! included for comparison.

pub mod baselines;
pub mod cli;
pub mod dwt;
pub mod energy;
pub mod error;
pub mod eval;
pub mod fis;
pub mod imgio;
pub mod pipeline;

pub use error::{Error, Result};
pub use imgio::GrayImage;
pub use pipeline::{detect_edges, EdgeResult, PipelineConfig};
