//! Benchmark metrics: tolerance-expanded greedy matching, segment- and
//! frame-level precision/recall/F1, absolute boundary error and real-time
//! factor.
//!
//! Times are quantized to integer nanoseconds before matching so equal
//! intersections compare equal and tie-breaking is exact.

mod frames;
mod matching;
mod render;
mod report;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use frames::{frame_interval, frame_prf, frame_prf_counts};
pub use matching::{expand, greedy_match, to_ns, union_segments, MatchSet, NsSegment, UnionGroup};
pub use render::CSV_HEADER;
pub use report::{
    abe, aggregate, default_tau_grid, evaluate, parse_tau_grid, CategoryReport, CategoryTauRow, MeanRow, MetricsReport,
    TauRow,
};

/// True-positive, false-positive and false-negative counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl Counts {
    pub fn new(tp: u64, fp: u64, fn_: u64) -> Self {
        Counts { tp, fp, fn_ }
    }

    pub fn prf(&self) -> Prf {
        Prf::from_counts(self)
    }
}

impl std::ops::Add for Counts {
    type Output = Counts;
    fn add(self, o: Counts) -> Counts {
        Counts::new(self.tp + o.tp, self.fp + o.fp, self.fn_ + o.fn_)
    }
}

impl std::iter::Sum for Counts {
    fn sum<I: Iterator<Item = Counts>>(iter: I) -> Counts {
        iter.fold(Counts::default(), |a, b| a + b)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Prf {
    /// Standard formulas; an empty denominator yields 0.
    pub fn from_counts(c: &Counts) -> Prf {
        let ratio = |a: u64, b: u64| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        let precision = ratio(c.tp, c.tp + c.fp);
        let recall = ratio(c.tp, c.tp + c.fn_);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Prf { precision, recall, f1 }
    }
}

/// Segment-level counts of a matching.
pub fn segment_counts(m: &MatchSet) -> Counts {
    Counts::new(m.pairs.len() as u64, m.unmatched_preds.len() as u64, m.unmatched_gts.len() as u64)
}

pub fn segment_prf(m: &MatchSet) -> Prf {
    segment_counts(m).prf()
}

/// Inference time over video time.
pub fn rtf(inference_s: f64, video_s: f64) -> Result<f64> {
    if !(video_s > 0.0) {
        return Err(Error::pre(format!("video duration {video_s} must be positive")));
    }
    Ok(inference_s / video_s)
}
