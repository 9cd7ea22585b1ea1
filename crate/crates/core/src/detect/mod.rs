//! Transition detectors: frame-difference heuristics with point-to-segment
//! conversion, a label-driven oracle, and a subprocess adapter.

mod external;
mod heuristics;
mod oracle;
mod points;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::segment::Segment;
use crate::video::ClipView;

pub use external::{parse_external_output, run_external_detector};
pub use heuristics::{adaptive_detector, content_detector, hist_detector, threshold_detector, AdaptiveParams};
pub use oracle::{oracle_detector, oracle_segments, OracleParams};
pub use points::{canonicalize, merge_min_gap, points_to_segments, FramePointScores};

pub const DEFAULT_CONTENT_THRESHOLD: f64 = 0.12;
pub const DEFAULT_HIST_THRESHOLD: f64 = 0.35;
pub const DEFAULT_HIST_BINS: usize = 32;
pub const DEFAULT_ADAPTIVE_THRESHOLD: f64 = 0.75;
pub const DEFAULT_DARK_LEVEL: f64 = 12.0 / 255.0;

/// Detector output on one clip or window.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DetectionResult {
    pub segments: Vec<Segment>,
    /// Seconds spent inside the detector.
    pub wall_time_s: f64,
    /// Seconds spent extracting or writing window clips, excluded from
    /// `wall_time_s`.
    #[serde(default)]
    pub io_time_s: f64,
}

/// Which detector to run and its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DetectorSpec {
    Content {
        threshold: f64,
    },
    Hist {
        bins: usize,
        threshold: f64,
    },
    Adaptive(AdaptiveParams),
    /// Flags frames whose mean luma is at or below `level`.
    Threshold {
        level: f64,
    },
    /// Replays fixed global segments, usually perturbed ground truth.
    Oracle {
        segments: Vec<Segment>,
    },
    External {
        command: Vec<String>,
        timeout_s: f64,
    },
}

impl DetectorSpec {
    pub fn content() -> Self {
        DetectorSpec::Content {
            threshold: DEFAULT_CONTENT_THRESHOLD,
        }
    }

    pub fn hist() -> Self {
        DetectorSpec::Hist {
            bins: DEFAULT_HIST_BINS,
            threshold: DEFAULT_HIST_THRESHOLD,
        }
    }

    pub fn adaptive() -> Self {
        DetectorSpec::Adaptive(AdaptiveParams::default())
    }

    pub fn threshold() -> Self {
        DetectorSpec::Threshold {
            level: DEFAULT_DARK_LEVEL,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DetectorSpec::Content { .. } => "content",
            DetectorSpec::Hist { .. } => "hist",
            DetectorSpec::Adaptive(_) => "adaptive",
            DetectorSpec::Threshold { .. } => "threshold",
            DetectorSpec::Oracle { .. } => "oracle",
            DetectorSpec::External { .. } => "external",
        }
    }

    /// Whether the detector reads the window's pixels in-process.
    pub fn needs_frames(&self) -> bool {
        !matches!(self, DetectorSpec::Oracle { .. } | DetectorSpec::External { .. })
    }

    /// Frame scores on a view, for the frame-difference detectors.
    pub fn scores(&self, view: &ClipView<'_>) -> Result<Option<FramePointScores>> {
        Ok(Some(match self {
            DetectorSpec::Content { threshold } => content_detector(view, *threshold)?,
            DetectorSpec::Hist { bins, threshold } => hist_detector(view, *bins, *threshold)?,
            DetectorSpec::Adaptive(p) => adaptive_detector(view, p)?,
            DetectorSpec::Threshold { level } => threshold_detector(view, *level)?,
            _ => return Ok(None),
        }))
    }

    /// Runs a frame-based detector over a whole view, returning segments in
    /// view time (first frame at 0).
    pub fn detect_view(&self, view: &ClipView<'_>) -> Result<Vec<Segment>> {
        if self.needs_frames() && view.len() < 2 && !matches!(self, DetectorSpec::Threshold { .. }) {
            return Ok(Vec::new());
        }
        match self.scores(view)? {
            Some(points) => Ok(points_to_segments(&points, view.fps)),
            None => Ok(Vec::new()),
        }
    }
}
