use super::{Counts, MatchSet, NsSegment, Prf};
use crate::video::Fps;

fn frame_of(ns: i64, fps: Fps) -> i64 {
    // round(ns * num / (den * 1e9)), halves away from zero, in exact integers
    let num = ns as i128 * fps.num() as i128;
    let den = fps.den() as i128 * 1_000_000_000;
    let q = (2 * num.abs() + den) / (2 * den);
    (if num < 0 { -q } else { q }) as i64
}

/// Inclusive frame-index range `round(start*fps) ..= round(end*fps)`.
pub fn frame_interval(seg: &NsSegment, fps: Fps) -> (i64, i64) {
    (frame_of(seg.start, fps), frame_of(seg.end, fps))
}

fn union_len(mut iv: Vec<(i64, i64)>) -> u64 {
    iv.retain(|(a, b)| a <= b);
    iv.sort_unstable();
    let mut total = 0u64;
    let mut cur: Option<(i64, i64)> = None;
    for (a, b) in iv {
        cur = match cur {
            Some((ca, cb)) if a <= cb + 1 => Some((ca, cb.max(b))),
            Some((ca, cb)) => {
                total += (cb - ca + 1) as u64;
                Some((a, b))
            }
            None => Some((a, b)),
        };
    }
    if let Some((a, b)) = cur {
        total += (b - a + 1) as u64;
    }
    total
}

/// Frame-level counts: TP frames are the union of per-pair frame
/// intersections; FP and FN are the remaining prediction and ground-truth
/// frames.
pub fn frame_prf_counts(m: &MatchSet, preds: &[NsSegment], gts: &[NsSegment], fps: Fps) -> Counts {
    let pi: Vec<(i64, i64)> = preds.iter().map(|s| frame_interval(s, fps)).collect();
    let gi: Vec<(i64, i64)> = gts.iter().map(|s| frame_interval(s, fps)).collect();
    let inter: Vec<(i64, i64)> = m
        .pairs
        .iter()
        .map(|p| {
            let (a, b) = (pi[p.pred], gi[p.gt]);
            (a.0.max(b.0), a.1.min(b.1))
        })
        .collect();
    let tp = union_len(inter);
    let all_p = union_len(pi);
    let all_g = union_len(gi);
    Counts::new(tp, all_p - tp, all_g - tp)
}

pub fn frame_prf(m: &MatchSet, preds: &[NsSegment], gts: &[NsSegment], fps: Fps) -> Prf {
    frame_prf_counts(m, preds, gts, fps).prf()
}
