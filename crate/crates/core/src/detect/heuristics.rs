use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::FramePointScores;
use crate::error::{Error, Result};
use crate::video::{frame_luma, ClipView, Frame};

fn need_pair(view: &ClipView<'_>) -> Result<()> {
    if view.len() < 2 {
        return Err(Error::pre(format!("need at least 2 frames, got {}", view.len())));
    }
    Ok(())
}

fn mean_abs_diff(a: &Frame, b: &Frame) -> f64 {
    let total: u64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(&x, &y)| x.abs_diff(y) as u64)
        .sum();
    total as f64 / (a.data().len() as f64 * 255.0)
}

fn content_diffs(view: &ClipView<'_>) -> Vec<f64> {
    let mut d: Vec<f64> = (1..view.len())
        .into_par_iter()
        .map(|i| mean_abs_diff(&view.frames[i - 1], &view.frames[i]))
        .collect();
    d.insert(0, 0.0);
    d
}

/// Mean absolute per-channel difference to the previous frame, over 255.
pub fn content_detector(view: &ClipView<'_>, threshold: f64) -> Result<FramePointScores> {
    need_pair(view)?;
    FramePointScores::new(content_diffs(view), threshold)
}

fn luma_histogram(frame: &Frame, bins: usize) -> Vec<f64> {
    let mut h = vec![0u64; bins];
    for px in frame.data().chunks_exact(3) {
        h[frame_luma(px[0], px[1], px[2]) as usize * bins / 256] += 1;
    }
    let n = frame.pixel_count() as f64;
    h.into_iter().map(|c| c as f64 / n).collect()
}

/// Total-variation distance between consecutive luma histograms.
pub fn hist_detector(view: &ClipView<'_>, bins: usize, threshold: f64) -> Result<FramePointScores> {
    need_pair(view)?;
    if !(2..=256).contains(&bins) {
        return Err(Error::pre(format!("bins {bins} outside [2, 256]")));
    }
    let hists: Vec<Vec<f64>> = view.frames.par_iter().map(|f| luma_histogram(f, bins)).collect();
    let mut scores = vec![0.0];
    for w in hists.windows(2) {
        let l1: f64 = w[0].iter().zip(&w[1]).map(|(a, b)| (a - b).abs()).sum();
        scores.push((0.5 * l1).min(1.0));
    }
    FramePointScores::new(scores, threshold)
}

/// Rolling-mean relative variant of the content score.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveParams {
    /// Neighbours on each side forming the baseline.
    pub window: usize,
    /// Content score below which a frame is never a boundary.
    pub min_content: f64,
    pub threshold: f64,
}

impl Default for AdaptiveParams {
    fn default() -> Self {
        AdaptiveParams {
            window: 2,
            min_content: 0.05,
            threshold: super::DEFAULT_ADAPTIVE_THRESHOLD,
        }
    }
}

/// Scores `r / (1 + r)` where `r` is the frame's content score over the mean
/// of its neighbours' scores.
pub fn adaptive_detector(view: &ClipView<'_>, p: &AdaptiveParams) -> Result<FramePointScores> {
    need_pair(view)?;
    if p.window == 0 {
        return Err(Error::pre("adaptive window must be at least 1"));
    }
    let c = content_diffs(view);
    let n = c.len();
    let scores = (0..n)
        .map(|i| {
            if i == 0 || c[i] < p.min_content {
                return 0.0;
            }
            let lo = i.saturating_sub(p.window).max(1);
            let hi = (i + p.window).min(n - 1);
            let nb: Vec<f64> = (lo..=hi).filter(|&k| k != i).map(|k| c[k]).collect();
            if nb.is_empty() {
                return 1.0;
            }
            let mean = nb.iter().sum::<f64>() / nb.len() as f64;
            if mean == 0.0 {
                1.0
            } else {
                let r = c[i] / mean;
                r / (1.0 + r)
            }
        })
        .collect();
    FramePointScores::new(scores, p.threshold)
}

/// Fade detector: frames with mean luma at or below `level` (in `[0, 1]`)
/// score 1, others 0.
pub fn threshold_detector(view: &ClipView<'_>, level: f64) -> Result<FramePointScores> {
    if view.is_empty() {
        return Err(Error::pre("empty clip"));
    }
    if !(0.0..=1.0).contains(&level) {
        return Err(Error::pre(format!("luma level {level} outside [0, 1]")));
    }
    let scores = view
        .frames
        .par_iter()
        .map(|f| {
            let sum: u64 = f.data().chunks_exact(3).map(|p| frame_luma(p[0], p[1], p[2]) as u64).sum();
            let mean = sum as f64 / (f.pixel_count() as f64 * 255.0);
            if mean <= level {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    FramePointScores::new(scores, 0.5)
}
