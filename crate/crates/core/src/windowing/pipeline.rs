use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{make_windows, project_to_global, temporal_nms, Candidate, Window};
use crate::detect::{merge_min_gap, run_external_detector, DetectionResult, DetectorSpec};
use crate::error::{Error, Result};
use crate::segment::Segment;
use crate::video::{save_rawvid, VideoClip};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub window_s: f64,
    pub stride_s: f64,
    pub nms_iou: f64,
    /// Joins per-window detections closer than this many seconds.
    #[serde(default)]
    pub min_gap_s: Option<f64>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            window_s: super::DEFAULT_WINDOW_S,
            stride_s: super::DEFAULT_STRIDE_S,
            nms_iou: super::DEFAULT_NMS_IOU,
            min_gap_s: None,
        }
    }
}

struct WindowOutput {
    candidates: Vec<Candidate>,
    infer_s: f64,
    io_s: f64,
}

const EPS: f64 = 1e-9;

/// Global segments of a replayed detector that fall in the window, in
/// window-local time.
fn oracle_local(window: &Window, segments: &[Segment]) -> Vec<Segment> {
    let span = window.span();
    segments
        .iter()
        .filter(|s| {
            if s.duration() == 0.0 {
                span.start <= s.start && s.start <= span.end
            } else {
                s.intersection(&span) > 0.0
            }
        })
        .map(|s| Segment::new(s.start.max(span.start) - span.start, s.end.min(span.end) - span.start))
        .collect()
}

fn run_window(clip: &VideoClip, window: &Window, detector: &DetectorSpec, opts: &PipelineOptions) -> Result<WindowOutput> {
    let fps = clip.fps();
    let n = clip.len();
    let first = fps.frames_ceil(window.global_start_s) as usize;
    let last = (fps.frames_floor(window.global_end_s) as usize).min(n.saturating_sub(1));
    let range = if first <= last && first < n { first..last + 1 } else { first..first };
    let view = clip.slice(range.clone());
    let offset = if view.is_empty() { 0.0 } else { clip.frame_time(range.start) - window.global_start_s };
    let view_hi = if view.is_empty() { 0.0 } else { clip.frame_time(range.end - 1) - window.global_start_s };

    let mut io_s = 0.0;
    let t0 = Instant::now();
    let (mut local, lo, hi) = match detector {
        DetectorSpec::Oracle { segments } => (oracle_local(window, segments), 0.0, window.len_s()),
        DetectorSpec::External { command, timeout_s } => {
            if view.is_empty() {
                (Vec::new(), 0.0, 0.0)
            } else {
                let t_io = Instant::now();
                let dir = tempfile::tempdir().map_err(|e| Error::io(std::env::temp_dir(), e))?;
                let path = dir.path().join(format!("window_{:05}.stdv", window.index));
                save_rawvid(&view.to_clip(), &path)?;
                io_s += t_io.elapsed().as_secs_f64();
                let r = run_external_detector(command, &path, *timeout_s)?;
                let segs = r.segments.iter().map(|s| s.shifted(offset)).collect();
                (segs, offset, view_hi)
            }
        }
        _ => {
            let segs = detector.detect_view(&view)?;
            (segs.iter().map(|s| s.shifted(offset)).collect(), offset, view_hi)
        }
    };
    if let Some(gap) = opts.min_gap_s {
        local = merge_min_gap(&local, gap);
    }
    let infer_s = (t0.elapsed().as_secs_f64() - io_s).max(0.0);

    let (global, clamped) = project_to_global(window, &local);
    let candidates: Vec<Candidate> = local
        .iter()
        .zip(global)
        .map(|(l, g)| Candidate {
            segment: g,
            window_start_s: window.global_start_s,
            window_end_s: window.global_end_s,
            open_start: window.index > 0 && l.start <= lo + EPS,
            open_end: !window.is_last && l.end >= hi - EPS,
        })
        .collect();
    tracing::info!(
        target: "stdkit::window",
        index = window.index,
        start_s = window.global_start_s,
        end_s = window.global_end_s,
        frames = view.len(),
        detections = candidates.len(),
        clamped,
        infer_s,
        io_s,
        "window done"
    );
    Ok(WindowOutput { candidates, infer_s, io_s })
}

/// Windows the clip, detects per window in parallel, projects to the global
/// timeline and merges with temporal NMS. `wall_time_s` sums per-window
/// detector time; window extraction I/O is reported in `io_time_s`.
pub fn run_pipeline(clip: &VideoClip, detector: &DetectorSpec, opts: &PipelineOptions) -> Result<DetectionResult> {
    if clip.is_empty() {
        return Err(Error::pre("empty clip"));
    }
    if !(0.0..=1.0).contains(&opts.nms_iou) {
        return Err(Error::pre(format!("NMS IoU {} outside [0, 1]", opts.nms_iou)));
    }
    let duration = clip.duration();
    let windows = make_windows(duration, opts.window_s, opts.stride_s)?;
    let outputs: Vec<Result<WindowOutput>> = windows.par_iter().map(|w| run_window(clip, w, detector, opts)).collect();
    let mut all = Vec::new();
    let (mut infer, mut io) = (0.0, 0.0);
    for (w, out) in windows.iter().zip(outputs) {
        let out = out.map_err(|e| Error::Window {
            index: w.index,
            source: Box::new(e),
        })?;
        infer += out.infer_s;
        io += out.io_s;
        all.extend(out.candidates);
    }
    let segments = temporal_nms(&all, opts.nms_iou)
        .into_iter()
        .map(|c| Segment::new(c.segment.start.clamp(0.0, duration), c.segment.end.clamp(0.0, duration)))
        .collect();
    Ok(DetectionResult {
        segments,
        wall_time_s: infer,
        io_time_s: io,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::{oracle_segments, OracleParams};
    use crate::segment::TransitionLabel;
    use crate::video::{Fps, Frame};

    fn flat_clip(seconds: usize, fps: u32) -> VideoClip {
        VideoClip::new(vec![Frame::solid(8, 6, [90, 90, 90]); seconds * fps as usize], Fps::integer(fps)).unwrap()
    }

    fn cut_clip(seconds: usize, cut_frame: usize) -> VideoClip {
        let frames = (0..seconds * 25)
            .map(|i| Frame::solid(8, 6, if i < cut_frame { [10, 20, 30] } else { [220, 200, 180] }))
            .collect();
        VideoClip::new(frames, Fps::integer(25)).unwrap()
    }

    #[test]
    fn static_clip_is_empty() {
        let r = run_pipeline(&flat_clip(30, 5), &DetectorSpec::content(), &PipelineOptions::default()).unwrap();
        assert!(r.segments.is_empty());
    }

    #[test]
    fn cut_in_overlap_reported_once() {
        // frame 237 sits at 9.48s, inside both [0,10] and [9,19]
        let clip = cut_clip(28, 237);
        let r = run_pipeline(&clip, &DetectorSpec::content(), &PipelineOptions::default()).unwrap();
        assert_eq!(r.segments.len(), 1);
        assert!((r.segments[0].start - 236.0 / 25.0).abs() < 1e-9);
        assert!((r.segments[0].end - 237.0 / 25.0).abs() < 1e-9);
        assert!(r.wall_time_s > 0.0);
    }

    #[test]
    fn oracle_identity_through_seams() {
        let clip = flat_clip(40, 5);
        let labels = vec![
            TransitionLabel::new(2.0, 3.0, "fade"),
            TransitionLabel::new(8.8, 10.2, "fade"),
            TransitionLabel::new(9.5, 9.5, "cut"),
            TransitionLabel::new(16.5, 19.5, "fade"),
            TransitionLabel::new(27.0, 27.0, "cut"),
            TransitionLabel::new(36.0, 40.0, "fade"),
        ];
        let p = OracleParams { jitter_s: 0.0, drop_prob: 0.0, seed: 1 };
        let segs = oracle_segments(&labels, &p, clip.duration()).unwrap();
        let r = run_pipeline(&clip, &DetectorSpec::Oracle { segments: segs.clone() }, &PipelineOptions::default()).unwrap();
        assert_eq!(r.segments, segs);
    }

    #[test]
    fn bad_options() {
        let clip = flat_clip(30, 5);
        let opts = PipelineOptions { window_s: 5.0, stride_s: 9.0, ..Default::default() };
        assert!(run_pipeline(&clip, &DetectorSpec::content(), &opts).is_err());
    }

    #[cfg(unix)]
    #[test]
    fn window_failure_names_index() {
        let clip = flat_clip(12, 5);
        let det = DetectorSpec::External {
            command: vec!["sh".into(), "-c".into(), "exit 4".into(), "x".into()],
            timeout_s: 10.0,
        };
        match run_pipeline(&clip, &det, &PipelineOptions::default()).unwrap_err() {
            Error::Window { index, .. } => assert_eq!(index, 0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[cfg(unix)]
    #[test]
    fn external_through_windows() {
        let clip = flat_clip(12, 5);
        let det = DetectorSpec::External {
            command: vec!["sh".into(), "-c".into(), r#"echo '[{"start":0.5,"end":0.6}]'"#.into(), "x".into()],
            timeout_s: 10.0,
        };
        let r = run_pipeline(&clip, &det, &PipelineOptions::default()).unwrap();
        assert_eq!(r.segments, vec![Segment::new(0.5, 0.6), Segment::new(9.5, 9.6)]);
        assert!(r.io_time_s > 0.0);
    }
}
