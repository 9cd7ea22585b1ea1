use tracing::debug;

use super::catalog::EffectId;
use super::plan::{check_shots, compute_tmax, SynthPlan};
use super::render::render_transition;
use crate::error::{Error, Result};
use crate::segment::TransitionLabel;
use crate::video::{Fps, Frame, VideoClip};

#[derive(Clone, Debug)]
pub struct SynthOutput {
    pub clip: VideoClip,
    /// Sorted, non-overlapping; each covers exactly the blended frames.
    pub labels: Vec<TransitionLabel>,
}

/// Progress of blended frame `j` out of `n`: `j / (n - 1)`, or `0.5` for a
/// single-frame transition.
pub(crate) fn frame_progress(j: usize, n: usize) -> f64 {
    if n == 1 {
        0.5
    } else {
        j as f64 / (n - 1) as f64
    }
}

fn overlap_frames(fps: Fps, duration_s: f64) -> usize {
    fps.frame_index(duration_s).max(0) as usize
}

/// Splices `shots` according to `plan`.
///
/// A transition of `k` frames overlaps the last `k` frames of the outgoing
/// shot with the first `k` of the incoming one. Its label starts at the
/// first blended frame and ends where the first pure incoming frame begins;
/// a cut yields `start == end` at the splice point.
pub fn synthesize(shots: &[VideoClip], plan: &SynthPlan) -> Result<SynthOutput> {
    let (_, fps) = check_shots(shots)?;
    if plan.specs.len() + 1 != shots.len() {
        return Err(Error::Invariant(format!(
            "{} shots need {} transitions, plan has {}",
            shots.len(),
            shots.len() - 1,
            plan.specs.len()
        )));
    }
    let mut overlaps = Vec::with_capacity(plan.specs.len());
    for (i, spec) in plan.specs.iter().enumerate() {
        let tmax = compute_tmax(shots[i].duration(), shots[i + 1].duration(), f64::INFINITY)?;
        if spec.duration_s < 0.0 || spec.duration_s > tmax + 1e-9 {
            return Err(Error::Invariant(format!(
                "transition {i} lasts {}s, limit is {tmax}s",
                spec.duration_s
            )));
        }
        if spec.effect.is_cut() && spec.duration_s != 0.0 {
            return Err(Error::Invariant(format!("cut {i} has nonzero duration")));
        }
        overlaps.push(overlap_frames(fps, spec.duration_s));
    }

    let total: usize = shots.iter().map(VideoClip::len).sum::<usize>() - overlaps.iter().sum::<usize>();
    let mut out: Vec<Frame> = Vec::with_capacity(total);
    let mut labels = Vec::with_capacity(plan.specs.len());
    for (i, shot) in shots.iter().enumerate() {
        let frames = shot.frames();
        let head = if i > 0 { overlaps[i - 1] } else { 0 };
        let tail = overlaps.get(i).copied().unwrap_or(0);
        if head + tail > frames.len() {
            return Err(Error::Invariant(format!(
                "shot {i} has {} frames but its transitions consume {}",
                frames.len(),
                head + tail
            )));
        }
        out.extend_from_slice(&frames[head..frames.len() - tail]);

        let Some(spec) = plan.specs.get(i) else { break };
        let next = shots[i + 1].frames();
        let start = out.len();
        for j in 0..tail {
            let p = frame_progress(j, tail);
            let a = &frames[frames.len() - tail + j];
            out.push(render_transition(a, &next[j], spec.effect, p, spec.seed)?);
        }
        labels.push(label(fps, start, tail, spec.effect));
    }
    debug!(frames = out.len(), transitions = labels.len(), "synthesized clip");
    Ok(SynthOutput {
        clip: VideoClip::new(out, fps)?,
        labels,
    })
}

fn label(fps: Fps, start: usize, len: usize, effect: EffectId) -> TransitionLabel {
    TransitionLabel::new(
        fps.frame_time(start as u64),
        fps.frame_time((start + len) as u64),
        effect.name(),
    )
}
