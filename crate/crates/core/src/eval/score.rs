use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imgio::GrayImage;

pub const DEFAULT_TOLERANCE_PX: u32 = 1;
pub const DEFAULT_ALPHA: f64 = 1.0 / 9.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub pratt_fom: f64,
    pub tolerance_px: u32,
    pub alpha: f64,
    pub true_positives: usize,
    pub predicted: usize,
    pub truth: usize,
}

fn edge_pixels(img: &GrayImage) -> Vec<(usize, usize)> {
    let w = img.width();
    img.pixels()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0.0)
        .map(|(i, _)| (i % w, i / w))
        .collect()
}

/// Exact squared Euclidean distance from every pixel to the nearest nonzero
/// pixel (lower-envelope transform along columns, then rows).
/// Returns `None` when the mask is empty.
pub fn squared_distance_transform(mask: &GrayImage) -> Option<Vec<u64>> {
    let (w, h) = mask.dimensions();
    if mask.count_nonzero() == 0 {
        return None;
    }
    const INF: u64 = u64::MAX / 4;
    let mut cols = vec![INF; w * h];
    let mut out = vec![0u64; w.max(h)];
    for x in 0..w {
        let column: Vec<u64> = (0..h)
            .map(|y| if mask.get(x, y) != 0.0 { 0 } else { INF })
            .collect();
        lower_envelope(&column, &mut out[..h]);
        for (y, &d) in out[..h].iter().enumerate() {
            cols[y * w + x] = d;
        }
    }
    let mut dist = vec![0u64; w * h];
    for y in 0..h {
        lower_envelope(&cols[y * w..(y + 1) * w], &mut out[..w]);
        dist[y * w..(y + 1) * w].copy_from_slice(&out[..w]);
    }
    Some(dist)
}

/// 1D squared distance transform `out[q] = min_p (q - p)^2 + f[p]`, with
/// very large `f` treated as absent.
fn lower_envelope(f: &[u64], out: &mut [u64]) {
    const INF: u64 = u64::MAX / 4;
    let n = f.len();
    let sites: Vec<usize> = (0..n).filter(|&p| f[p] < INF).collect();
    if sites.is_empty() {
        out.fill(INF);
        return;
    }
    // intersection of parabolas from sites p < q, as a rational compared exactly
    let fi = |p: usize| f[p] as i128 + (p * p) as i128;
    let mut v: Vec<usize> = Vec::with_capacity(sites.len());
    // z boundaries stored as (num, den) with den > 0
    let mut z: Vec<(i128, i128)> = Vec::with_capacity(sites.len());
    for &q in &sites {
        loop {
            match v.last() {
                None => {
                    v.push(q);
                    break;
                }
                Some(&p) => {
                    let s = (fi(q) - fi(p), 2 * (q as i128 - p as i128));
                    // pop p while the new intersection lies at or before p's own left boundary
                    let pop = z.last().is_some_and(|&(zn, zd)| s.0 * zd <= zn * s.1);
                    if pop {
                        v.pop();
                        z.pop();
                    } else {
                        v.push(q);
                        z.push(s);
                        break;
                    }
                }
            }
        }
    }
    let mut k = 0;
    for (q, o) in out.iter_mut().enumerate() {
        // advance while boundary z[k] < q  (q * den > num)
        while k < z.len() && z[k].0 < q as i128 * z[k].1 {
            k += 1;
        }
        let p = v[k];
        let d = q as i128 - p as i128;
        *o = (d * d) as u64 + f[p];
    }
}

/// Maximum one-to-one matching between predicted and truth pixels within
/// Chebyshev distance `tol`. Candidates are tried nearest first, in
/// row-major order; greedy assignment is followed by augmenting paths so the
/// match count does not depend on scan order.
fn match_count(pred: &[(usize, usize)], truth: &GrayImage, tol: usize) -> usize {
    let (w, h) = truth.dimensions();
    let mut truth_index = vec![usize::MAX; w * h];
    let mut n_truth = 0;
    for (i, &v) in truth.pixels().iter().enumerate() {
        if v != 0.0 {
            truth_index[i] = n_truth;
            n_truth += 1;
        }
    }
    let adj: Vec<Vec<usize>> = pred
        .iter()
        .map(|&(x, y)| {
            let mut cand = Vec::new();
            for ty in y.saturating_sub(tol)..=(y + tol).min(h - 1) {
                for tx in x.saturating_sub(tol)..=(x + tol).min(w - 1) {
                    let t = truth_index[ty * w + tx];
                    if t != usize::MAX {
                        let d = tx.abs_diff(x).pow(2) + ty.abs_diff(y).pow(2);
                        cand.push((d, ty, tx, t));
                    }
                }
            }
            cand.sort_unstable();
            cand.into_iter().map(|c| c.3).collect()
        })
        .collect();

    let mut match_t: Vec<Option<usize>> = vec![None; n_truth];
    let mut match_p: Vec<Option<usize>> = vec![None; pred.len()];
    for (u, cands) in adj.iter().enumerate() {
        if let Some(&t) = cands.iter().find(|&&t| match_t[t].is_none()) {
            match_t[t] = Some(u);
            match_p[u] = Some(t);
        }
    }
    let mut stamp = vec![usize::MAX; n_truth];
    for root in 0..pred.len() {
        if match_p[root].is_none() {
            augment(root, &adj, &mut match_t, &mut match_p, &mut stamp);
        }
    }
    match_p.iter().filter(|m| m.is_some()).count()
}

/// Iterative depth-first search for an augmenting path from a free predicted pixel.
fn augment(
    root: usize,
    adj: &[Vec<usize>],
    match_t: &mut [Option<usize>],
    match_p: &mut [Option<usize>],
    stamp: &mut [usize],
) -> bool {
    let mut stack = vec![(root, 0usize)];
    let mut via: Vec<usize> = Vec::new();
    while let Some(top) = stack.last_mut() {
        let (u, i) = *top;
        if i == adj[u].len() {
            stack.pop();
            via.pop();
            continue;
        }
        top.1 += 1;
        let t = adj[u][i];
        if stamp[t] == root {
            continue;
        }
        stamp[t] = root;
        match match_t[t] {
            None => {
                via.push(t);
                for (&(p, _), &tt) in stack.iter().zip(&via) {
                    match_p[p] = Some(tt);
                    match_t[tt] = Some(p);
                }
                return true;
            }
            Some(next) => {
                stack.push((next, 0));
                via.push(t);
            }
        }
    }
    false
}

/// Scores a binary edge map against a binary truth map. Any nonzero pixel counts as an edge.
///
/// Empty maps: both empty scores all ones; otherwise an empty side gives 0
/// for every ratio that involves it, and the figure of merit is 0.
pub fn score(
    pred: &GrayImage,
    truth: &GrayImage,
    tolerance_px: u32,
    alpha: f64,
) -> Result<EdgeScore> {
    if pred.dimensions() != truth.dimensions() {
        return Err(Error::DimensionMismatch(format!(
            "prediction is {}x{} but truth is {}x{}",
            pred.width(),
            pred.height(),
            truth.width(),
            truth.height()
        )));
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::Precondition(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let p = edge_pixels(pred);
    let n_truth = truth.count_nonzero();
    let base = EdgeScore {
        precision: 0.0,
        recall: 0.0,
        f1: 0.0,
        pratt_fom: 0.0,
        tolerance_px,
        alpha,
        true_positives: 0,
        predicted: p.len(),
        truth: n_truth,
    };
    if p.is_empty() && n_truth == 0 {
        return Ok(EdgeScore {
            precision: 1.0,
            recall: 1.0,
            f1: 1.0,
            pratt_fom: 1.0,
            ..base
        });
    }
    if p.is_empty() || n_truth == 0 {
        return Ok(base);
    }

    let tp = match_count(&p, truth, tolerance_px as usize);
    let precision = tp as f64 / p.len() as f64;
    let recall = tp as f64 / n_truth as f64;
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };

    let dist = squared_distance_transform(truth).expect("truth is nonempty");
    let w = pred.width();
    // Summing per distinct distance keeps the total independent of pixel order.
    let mut histogram: BTreeMap<u64, usize> = BTreeMap::new();
    for &(x, y) in &p {
        *histogram.entry(dist[y * w + x]).or_default() += 1;
    }
    // 1/(1 + a d^2) written as (1/a)/(1/a + d^2): for a = 1/9 and d = 1 this is exactly 0.9.
    let inv_alpha = 1.0 / alpha;
    let sum: f64 = histogram
        .iter()
        .map(|(&d2, &count)| count as f64 * inv_alpha / (inv_alpha + d2 as f64))
        .sum();
    let pratt_fom = sum / p.len().max(n_truth) as f64;

    Ok(EdgeScore {
        precision,
        recall,
        f1,
        pratt_fom,
        true_positives: tp,
        ..base
    })
}
