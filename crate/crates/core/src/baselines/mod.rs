//! Reference detectors for comparison: Sobel with an RMS-derived threshold, and Canny.

mod canny;
mod sobel;

pub use canny::{canny_edges, canny_thresholds, gaussian_blur, CannyConfig};
pub use sobel::{sobel_edges_rms, sobel_gradient, SobelGradient, DEFAULT_RMS_SCALE};
