//! Sliding-window inference over arbitrary-length clips: window layout,
//! projection of window-local predictions, temporal NMS and the pipeline
//! tying them together.

mod nms;
mod pipeline;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::segment::Segment;

pub use nms::{temporal_nms, Candidate};
pub use pipeline::{run_pipeline, PipelineOptions};

pub const DEFAULT_WINDOW_S: f64 = 10.0;
pub const DEFAULT_STRIDE_S: f64 = 9.0;
pub const DEFAULT_NMS_IOU: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub index: usize,
    pub global_start_s: f64,
    pub global_end_s: f64,
    pub is_last: bool,
}

impl Window {
    pub fn len_s(&self) -> f64 {
        self.global_end_s - self.global_start_s
    }

    pub fn span(&self) -> Segment {
        Segment::new(self.global_start_s, self.global_end_s)
    }
}

/// Windows `[k*s, min(k*s + w, duration)]` until one reaches the end.
pub fn make_windows(duration_s: f64, w: f64, s: f64) -> Result<Vec<Window>> {
    if !(duration_s > 0.0) || !duration_s.is_finite() {
        return Err(Error::pre(format!("duration {duration_s} must be positive")));
    }
    if !(w > 0.0) || !w.is_finite() {
        return Err(Error::pre(format!("window {w} must be positive")));
    }
    if !(s > 0.0) {
        return Err(Error::pre(format!("stride {s} must be positive")));
    }
    if s > w {
        return Err(Error::pre(format!("stride {s} exceeds window {w}, leaving gaps")));
    }
    let mut out = Vec::new();
    for k in 0.. {
        let start = k as f64 * s;
        let end = (start + w).min(duration_s);
        let is_last = end >= duration_s;
        out.push(Window {
            index: k,
            global_start_s: start,
            global_end_s: end,
            is_last,
        });
        if is_last {
            break;
        }
    }
    Ok(out)
}

/// Local segments clamped to the window and shifted onto the global
/// timeline, plus how many needed clamping.
pub fn project_to_global(window: &Window, local: &[Segment]) -> (Vec<Segment>, usize) {
    let len = window.len_s();
    let mut clamped = 0;
    let segs = local
        .iter()
        .map(|s| {
            let c = Segment::new(s.start.clamp(0.0, len), s.end.clamp(0.0, len));
            if c != *s {
                clamped += 1;
                tracing::warn!(window = window.index, start = s.start, end = s.end, "local segment outside window, clamped");
            }
            c.shifted(window.global_start_s)
        })
        .collect();
    (segs, clamped)
}
