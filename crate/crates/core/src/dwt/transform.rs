use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::filters::WaveletFilterPair;
use crate::error::{Error, Result};

/// How samples outside `[0, n)` are synthesised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extension {
    /// Half-sample reflection: `x[-1] = x[0]`, `x[n] = x[n-1]`.
    #[default]
    Symmetric,
    /// Circular wrap; even lengths only. Orthogonal, so it preserves energy.
    Periodic,
}

/// Number of coefficients per band produced from `n` samples.
///
/// Symmetric extension keeps every even-indexed output of the full
/// convolution, `ceil((n + L - 1) / 2)`, which is what exact inversion with
/// the plain synthesis bank needs. Periodic extension keeps `n / 2`.
pub fn band_len(n: usize, filter_len: usize, ext: Extension) -> usize {
    match ext {
        Extension::Symmetric => (n + filter_len) / 2,
        Extension::Periodic => n / 2,
    }
}

#[inline]
fn reflect(j: isize, n: usize) -> usize {
    let period = 2 * n as isize;
    let j = j.rem_euclid(period) as usize;
    if j < n {
        j
    } else {
        2 * n - 1 - j
    }
}

fn check_analysis_len(n: usize, ext: Extension) -> Result<()> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "wavelet analysis needs at least 2 samples, got {n}"
        )));
    }
    if ext == Extension::Periodic && !n.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "periodic extension needs an even length, got {n}"
        )));
    }
    Ok(())
}

/// Convolve-and-decimate into caller-provided buffers.
fn analyze_into(
    x: &[f64],
    f: &WaveletFilterPair,
    ext: Extension,
    approx: &mut [f64],
    detail: &mut [f64],
) {
    let n = x.len();
    let (lo, hi) = (&f.analysis_lowpass, &f.analysis_highpass);
    for (i, (a, d)) in approx.iter_mut().zip(detail.iter_mut()).enumerate() {
        let mut sa = 0.0;
        let mut sd = 0.0;
        for k in 0..lo.len() {
            let j = 2 * i as isize - k as isize;
            let idx = match ext {
                Extension::Symmetric => reflect(j, n),
                Extension::Periodic => j.rem_euclid(n as isize) as usize,
            };
            sa += lo[k] * x[idx];
            sd += hi[k] * x[idx];
        }
        *a = sa;
        *d = sd;
    }
}

/// Upsample, filter and sum into `out` (whose length is the original length).
fn synthesize_into(
    approx: &[f64],
    detail: &[f64],
    f: &WaveletFilterPair,
    ext: Extension,
    out: &mut [f64],
) {
    let n = out.len();
    let len = f.len();
    let (slo, shi) = (&f.synthesis_lowpass, &f.synthesis_highpass);
    match ext {
        Extension::Symmetric => {
            // x[m] = Σ_i slo[m + L-1 - 2i]·a[i] + shi[m + L-1 - 2i]·d[i]
            for (m, o) in out.iter_mut().enumerate() {
                let first = m.div_ceil(2);
                let last = ((m + len - 1) / 2).min(approx.len() - 1);
                let mut s = 0.0;
                for i in first..=last {
                    let t = m + len - 1 - 2 * i;
                    s += slo[t] * approx[i] + shi[t] * detail[i];
                }
                *o = s;
            }
        }
        Extension::Periodic => {
            out.fill(0.0);
            for i in 0..approx.len() {
                for t in 0..len {
                    // analysis tap k = L-1-t touched x[(2i - k) mod n]
                    let k = (len - 1 - t) as isize;
                    let m = (2 * i as isize - k).rem_euclid(n as isize) as usize;
                    out[m] += slo[t] * approx[i] + shi[t] * detail[i];
                }
            }
        }
    }
}

/// One-level 1D analysis with half-sample symmetric extension.
pub fn analyze_1d(signal: &[f64], filters: &WaveletFilterPair) -> Result<(Vec<f64>, Vec<f64>)> {
    analyze_1d_with(signal, filters, Extension::Symmetric)
}

pub fn analyze_1d_with(
    signal: &[f64],
    filters: &WaveletFilterPair,
    ext: Extension,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_analysis_len(signal.len(), ext)?;
    let m = band_len(signal.len(), filters.len(), ext);
    let mut approx = vec![0.0; m];
    let mut detail = vec![0.0; m];
    analyze_into(signal, filters, ext, &mut approx, &mut detail);
    Ok((approx, detail))
}

/// Inverse of [`analyze_1d`].
pub fn synthesize_1d(
    approx: &[f64],
    detail: &[f64],
    filters: &WaveletFilterPair,
    original_length: usize,
) -> Result<Vec<f64>> {
    synthesize_1d_with(
        approx,
        detail,
        filters,
        original_length,
        Extension::Symmetric,
    )
}

pub fn synthesize_1d_with(
    approx: &[f64],
    detail: &[f64],
    filters: &WaveletFilterPair,
    original_length: usize,
    ext: Extension,
) -> Result<Vec<f64>> {
    check_analysis_len(original_length, ext)?;
    let m = band_len(original_length, filters.len(), ext);
    if approx.len() != m || detail.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "length-{original_length} signal needs {m} coefficients per band, got {} and {}",
            approx.len(),
            detail.len()
        )));
    }
    let mut out = vec![0.0; original_length];
    synthesize_into(approx, detail, filters, ext, &mut out);
    Ok(out)
}

/// Row-major 2D buffer used internally for the separable passes.
#[derive(Clone)]
pub(crate) struct Grid {
    pub w: usize,
    pub h: usize,
    pub data: Vec<f64>,
}

impl Grid {
    pub fn new(w: usize, h: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), w * h);
        Self { w, h, data }
    }

    fn transpose(&self) -> Grid {
        let mut data = vec![0.0; self.w * self.h];
        for y in 0..self.h {
            for x in 0..self.w {
                data[x * self.h + y] = self.data[y * self.w + x];
            }
        }
        Grid::new(self.h, self.w, data)
    }

    fn average(&self, other: &Grid) -> Grid {
        debug_assert_eq!((self.w, self.h), (other.w, other.h));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a + b) * 0.5)
            .collect();
        Grid::new(self.w, self.h, data)
    }
}

/// Analyze every row; returns (lowpass, highpass) grids of width `band_len(w)`.
fn analyze_rows(g: &Grid, f: &WaveletFilterPair, ext: Extension) -> (Grid, Grid) {
    let m = band_len(g.w, f.len(), ext);
    let mut lo = vec![0.0; m * g.h];
    let mut hi = vec![0.0; m * g.h];
    lo.par_chunks_mut(m)
        .zip(hi.par_chunks_mut(m))
        .zip(g.data.par_chunks(g.w))
        .for_each(|((a, d), row)| analyze_into(row, f, ext, a, d));
    (Grid::new(m, g.h, lo), Grid::new(m, g.h, hi))
}

fn analyze_cols(g: &Grid, f: &WaveletFilterPair, ext: Extension) -> (Grid, Grid) {
    let (lo, hi) = analyze_rows(&g.transpose(), f, ext);
    (lo.transpose(), hi.transpose())
}

fn synthesize_rows(
    lo: &Grid,
    hi: &Grid,
    f: &WaveletFilterPair,
    ext: Extension,
    width: usize,
) -> Grid {
    let mut out = vec![0.0; width * lo.h];
    out.par_chunks_mut(width)
        .zip(lo.data.par_chunks(lo.w))
        .zip(hi.data.par_chunks(hi.w))
        .for_each(|((o, a), d)| synthesize_into(a, d, f, ext, o));
    Grid::new(width, lo.h, out)
}

fn synthesize_cols(
    lo: &Grid,
    hi: &Grid,
    f: &WaveletFilterPair,
    ext: Extension,
    height: usize,
) -> Grid {
    synthesize_rows(&lo.transpose(), &hi.transpose(), f, ext, height).transpose()
}

/// The four quadrant grids in (LL, LH, HL, HH) order.
pub(crate) type Quad = [Grid; 4];

/// Forward separable 2D step.
///
/// Rows-then-columns and columns-then-rows are computed and averaged so that
/// transposing the input transposes the output and swaps LH/HL bit-exactly.
pub(crate) fn forward_2d(g: &Grid, f: &WaveletFilterPair, ext: Extension) -> Quad {
    let (rl, rh) = analyze_rows(g, f, ext);
    let (ll_a, lh_a) = analyze_cols(&rl, f, ext);
    let (hl_a, hh_a) = analyze_cols(&rh, f, ext);

    let (cl, ch) = analyze_cols(g, f, ext);
    let (ll_b, hl_b) = analyze_rows(&cl, f, ext);
    let (lh_b, hh_b) = analyze_rows(&ch, f, ext);

    [
        ll_a.average(&ll_b),
        lh_a.average(&lh_b),
        hl_a.average(&hl_b),
        hh_a.average(&hh_b),
    ]
}

/// Inverse of [`forward_2d`] back to a `width x height` grid.
pub(crate) fn inverse_2d(
    q: &Quad,
    f: &WaveletFilterPair,
    ext: Extension,
    width: usize,
    height: usize,
) -> Grid {
    let [ll, lh, hl, hh] = q;
    let row_low = synthesize_cols(ll, lh, f, ext, height);
    let row_high = synthesize_cols(hl, hh, f, ext, height);
    let a = synthesize_rows(&row_low, &row_high, f, ext, width);

    let col_low = synthesize_rows(ll, hl, f, ext, width);
    let col_high = synthesize_rows(lh, hh, f, ext, width);
    let b = synthesize_cols(&col_low, &col_high, f, ext, height);

    a.average(&b)
}
