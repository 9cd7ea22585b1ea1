use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::segment::Segment;
use crate::video::Fps;

/// Per-frame boundary probabilities with the cut-off that binarizes them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FramePointScores {
    scores: Vec<f64>,
    threshold: f64,
}

impl FramePointScores {
    pub fn new(scores: Vec<f64>, threshold: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(Error::pre(format!("threshold {threshold} outside [0, 1]")));
        }
        if let Some(bad) = scores.iter().find(|s| !(0.0..=1.0).contains(*s)) {
            return Err(Error::pre(format!("score {bad} outside [0, 1]")));
        }
        Ok(FramePointScores { scores, threshold })
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn with_threshold(&self, threshold: f64) -> Result<Self> {
        Self::new(self.scores.clone(), threshold)
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        self.scores[i] >= self.threshold
    }
}

/// Converts boundary frames to segments. A maximal run of boundary frames
/// `i..=j` spans from the last clean frame `i - 1` to `j`; a run starting at
/// frame 0 starts at 0.
pub fn points_to_segments(points: &FramePointScores, fps: Fps) -> Vec<Segment> {
    let mut out = Vec::new();
    let mut i = 0;
    let n = points.len();
    while i < n {
        if !points.is_boundary(i) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < n && points.is_boundary(j + 1) {
            j += 1;
        }
        let start = if i == 0 { 0.0 } else { fps.frame_time(i as u64 - 1) };
        out.push(Segment::new(start, fps.frame_time(j as u64)));
        i = j + 1;
    }
    out
}

/// Joins consecutive segments separated by less than `min_gap_s`.
pub fn merge_min_gap(segments: &[Segment], min_gap_s: f64) -> Vec<Segment> {
    let mut out: Vec<Segment> = Vec::with_capacity(segments.len());
    for s in segments {
        match out.last_mut() {
            Some(last) if s.start - last.end < min_gap_s => last.end = last.end.max(s.end),
            _ => out.push(*s),
        }
    }
    out
}

/// Sorts segments and unions those with positive overlap, or a zero-length
/// segment lying inside another.
pub fn canonicalize(mut segments: Vec<Segment>) -> Vec<Segment> {
    segments.sort_by(|a, b| a.start.total_cmp(&b.start).then(a.end.total_cmp(&b.end)));
    let mut out: Vec<Segment> = Vec::with_capacity(segments.len());
    for s in segments {
        match out.last_mut() {
            Some(last) if joins(last, &s) => last.end = last.end.max(s.end),
            _ => out.push(s),
        }
    }
    out
}

fn joins(a: &Segment, b: &Segment) -> bool {
    if a.intersection(b) > 0.0 {
        return true;
    }
    let inside = |p: &Segment, q: &Segment| p.duration() == 0.0 && q.start <= p.start && p.start <= q.end;
    (inside(a, b) || inside(b, a)) && !(a.duration() == 0.0 && b.duration() == 0.0 && a.start != b.start)
}
