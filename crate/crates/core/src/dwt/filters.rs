use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Orthogonal wavelet families available to the transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Wavelet {
    Haar,
    /// Daubechies, 2 vanishing moments (4 taps).
    #[default]
    Db2,
    /// Daubechies, 4 vanishing moments (8 taps).
    Db4,
}

impl Wavelet {
    pub const ALL: [Wavelet; 3] = [Wavelet::Haar, Wavelet::Db2, Wavelet::Db4];

    pub fn name(self) -> &'static str {
        match self {
            Wavelet::Haar => "haar",
            Wavelet::Db2 => "db2",
            Wavelet::Db4 => "db4",
        }
    }

    pub fn filters(self) -> WaveletFilterPair {
        WaveletFilterPair::new(self)
    }
}

impl fmt::Display for Wavelet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Wavelet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "haar" | "db1" => Ok(Wavelet::Haar),
            "db2" => Ok(Wavelet::Db2),
            "db4" => Ok(Wavelet::Db4),
            other => Err(Error::InvalidArgument(format!(
                "unknown wavelet '{other}' (expected haar, db2 or db4)"
            ))),
        }
    }
}

/// Daubechies scaling (synthesis lowpass) coefficients, 8 taps, from a
/// 50-digit spectral factorization (the widely copied 16-digit table is
/// only orthonormal to about 1e-12).
const DB4_SCALING: [f64; 8] = [
    0.230_377_813_308_896_5,
    0.714_846_570_552_915_7,
    0.630_880_767_929_858_9,
    -0.027_983_769_416_859_854,
    -0.187_034_811_719_093_09,
    0.030_841_381_835_560_764,
    0.032_883_011_666_885_2,
    -0.010_597_401_785_069_032,
];

/// Analysis and synthesis filter banks for one orthogonal wavelet.
///
/// Analysis filters are applied by convolution, `y[n] = Σ f[k]·x[n-k]`.
/// The highpass is the quadrature mirror of the lowpass,
/// `hi[k] = (-1)^k · lo[L-1-k]`, and each synthesis filter is the time
/// reverse of its analysis counterpart.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletFilterPair {
    pub wavelet: Wavelet,
    pub analysis_lowpass: Vec<f64>,
    pub analysis_highpass: Vec<f64>,
    pub synthesis_lowpass: Vec<f64>,
    pub synthesis_highpass: Vec<f64>,
}

impl WaveletFilterPair {
    pub fn new(wavelet: Wavelet) -> Self {
        let scaling: Vec<f64> = match wavelet {
            Wavelet::Haar => vec![std::f64::consts::FRAC_1_SQRT_2; 2],
            Wavelet::Db2 => {
                let s3 = 3f64.sqrt();
                let norm = 4.0 * std::f64::consts::SQRT_2;
                vec![
                    (1.0 + s3) / norm,
                    (3.0 + s3) / norm,
                    (3.0 - s3) / norm,
                    (1.0 - s3) / norm,
                ]
            }
            Wavelet::Db4 => DB4_SCALING.to_vec(),
        };
        let analysis_lowpass: Vec<f64> = scaling.iter().rev().copied().collect();
        let len = analysis_lowpass.len();
        let analysis_highpass: Vec<f64> = (0..len)
            .map(|k| {
                let v = analysis_lowpass[len - 1 - k];
                if k % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .collect();
        let synthesis_lowpass = analysis_lowpass.iter().rev().copied().collect();
        let synthesis_highpass = analysis_highpass.iter().rev().copied().collect();
        Self {
            wavelet,
            analysis_lowpass,
            analysis_highpass,
            synthesis_lowpass,
            synthesis_highpass,
        }
    }

    pub fn len(&self) -> usize {
        self.analysis_lowpass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.analysis_lowpass.is_empty()
    }
}
