use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::segment::Segment;

/// A global-time prediction together with the window that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub segment: Segment,
    pub window_start_s: f64,
    pub window_end_s: f64,
    /// The segment was cut off at its window's start (not the clip start).
    #[serde(default)]
    pub open_start: bool,
    /// The segment was cut off at its window's end (not the clip end).
    #[serde(default)]
    pub open_end: bool,
}

impl Candidate {
    pub fn new(segment: Segment, window_start_s: f64, window_end_s: f64) -> Self {
        Candidate {
            segment,
            window_start_s,
            window_end_s,
            open_start: false,
            open_end: false,
        }
    }

    /// Distance from the segment midpoint to the nearest edge of its window.
    pub fn interiority(&self) -> f64 {
        let m = self.segment.midpoint();
        (m - self.window_start_s).min(self.window_end_s - m)
    }

    fn truncated(&self) -> bool {
        self.open_start || self.open_end
    }
}

fn rank(a: &Candidate, b: &Candidate) -> Ordering {
    b.interiority()
        .total_cmp(&a.interiority())
        .then(a.segment.start.total_cmp(&b.segment.start))
        .then(a.segment.end.total_cmp(&b.segment.end))
        .then(a.window_start_s.total_cmp(&b.window_start_s))
        .then(a.window_end_s.total_cmp(&b.window_end_s))
        .then(a.open_start.cmp(&b.open_start))
        .then(a.open_end.cmp(&b.open_end))
}

/// Positive overlap, or a zero-length segment lying inside the other.
fn touches(a: &Segment, b: &Segment) -> bool {
    if a.intersection(b) > 0.0 {
        return true;
    }
    let inside = |p: &Segment, q: &Segment| p.duration() == 0.0 && q.start <= p.start && p.start <= q.end;
    (inside(a, b) || inside(b, a)) && !(a.duration() == 0.0 && b.duration() == 0.0 && a.start != b.start)
}

fn hull(a: &Segment, b: &Segment) -> Segment {
    Segment::new(a.start.min(b.start), a.end.max(b.end))
}

/// Temporal NMS ranked by interiority.
///
/// Candidates are visited from most to least interior (ties: earlier start,
/// then end, then window). A candidate survives if its IoU with every
/// survivor is below `iou_threshold`. A suppressed candidate that was cut off
/// by its window edge extends the survivor it overlaps most, so a transition
/// straddling a window seam is reassembled rather than truncated. Finally,
/// overlapping survivors are union-merged. Output is sorted by start and
/// pairwise non-overlapping; feeding it back in returns it unchanged.
pub fn temporal_nms(candidates: &[Candidate], iou_threshold: f64) -> Vec<Candidate> {
    let mut order: Vec<Candidate> = candidates.to_vec();
    order.sort_by(rank);
    let mut kept: Vec<Candidate> = Vec::new();
    for c in order {
        let mut best: Option<(usize, f64)> = None;
        for (k, a) in kept.iter().enumerate() {
            let iou = c.segment.iou(&a.segment);
            if iou >= iou_threshold && best.is_none_or(|(_, b)| iou > b) {
                best = Some((k, iou));
            }
        }
        match best {
            None => kept.push(c),
            Some((k, _)) => {
                if c.truncated() && touches(&c.segment, &kept[k].segment) {
                    kept[k].segment = hull(&kept[k].segment, &c.segment);
                }
            }
        }
    }
    kept.sort_by(|a, b| {
        a.segment
            .start
            .total_cmp(&b.segment.start)
            .then(a.segment.end.total_cmp(&b.segment.end))
            .then(rank(a, b))
    });
    let mut out: Vec<Candidate> = Vec::with_capacity(kept.len());
    for c in kept {
        match out.last_mut() {
            Some(last) if touches(&last.segment, &c.segment) => {
                let merged = hull(&last.segment, &c.segment);
                if rank(&c, last) == Ordering::Less {
                    *last = c;
                }
                last.segment = merged;
            }
            _ => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cand(s: f64, e: f64, ws: f64, we: f64) -> Candidate {
        Candidate::new(Segment::new(s, e), ws, we)
    }

    fn segs(c: &[Candidate]) -> Vec<Segment> {
        c.iter().map(|c| c.segment).collect()
    }

    #[test]
    fn duplicate_keeps_most_interior() {
        let out = temporal_nms(&[cand(5.0, 5.2, 4.99, 14.99), cand(5.0, 5.2, 0.0, 10.0)], 0.5);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].segment, Segment::new(5.0, 5.2));
        assert_eq!(out[0].window_start_s, 0.0);
        // interiority arithmetic: 4.9 from [0,10] vs 0.11 from [4.99,14.99]
        assert!((out[0].interiority() - 4.9).abs() < 1e-12);
    }

    #[test]
    fn disjoint_both_kept() {
        let out = temporal_nms(&[cand(5.0, 6.0, 0.0, 10.0), cand(1.0, 2.0, 0.0, 10.0)], 0.5);
        assert_eq!(segs(&out), vec![Segment::new(1.0, 2.0), Segment::new(5.0, 6.0)]);
    }

    #[test]
    fn weak_overlap_merges() {
        let a = Segment::new(4.0, 5.0);
        let b = Segment::new(4.8, 6.0);
        assert!((a.iou(&b) - 0.2 / 2.0).abs() < 1e-12);
        let out = temporal_nms(&[cand(4.0, 5.0, 0.0, 10.0), cand(4.8, 6.0, 0.0, 10.0)], 0.5);
        assert_eq!(segs(&out), vec![Segment::new(4.0, 6.0)]);
    }

    #[test]
    fn seam_fragments_reassemble() {
        // (8.8, 10.2) seen through [0,10] and [9,19]
        let mut left = cand(8.8, 10.0, 0.0, 10.0);
        left.open_end = true;
        let mut right = cand(9.0, 10.2, 9.0, 19.0);
        right.open_start = true;
        assert!(left.segment.iou(&right.segment) >= 0.5);
        let out = temporal_nms(&[left, right], 0.5);
        assert_eq!(segs(&out), vec![Segment::new(8.8, 10.2)]);
        // without the truncation flags the lower-ranked fragment is simply dropped
        let out = temporal_nms(&[cand(8.8, 10.0, 0.0, 10.0), cand(9.0, 10.2, 9.0, 19.0)], 0.5);
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn cut_duplicates() {
        let out = temporal_nms(&[cand(9.5, 9.5, 0.0, 10.0), cand(9.5, 9.5, 9.0, 19.0)], 0.5);
        assert_eq!(segs(&out), vec![Segment::new(9.5, 9.5)]);
        // equal interiority (0.5); the earlier window wins the tie
        assert_eq!(out[0].window_start_s, 0.0);
    }

    fn arb_candidates() -> impl Strategy<Value = Vec<Candidate>> {
        proptest::collection::vec((0u32..60, 0u32..12, 0u32..4, any::<bool>(), any::<bool>()), 0..12).prop_map(|v| {
            v.into_iter()
                .map(|(s, d, w, os, oe)| {
                    let start = s as f64 * 0.25;
                    let ws = w as f64 * 4.5;
                    let mut c = cand(start, start + d as f64 * 0.25, ws, ws + 5.0);
                    c.open_start = os;
                    c.open_end = oe;
                    c
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn idempotent(c in arb_candidates(), t in 0.05f64..=1.0) {
            let once = temporal_nms(&c, t);
            let twice = temporal_nms(&once, t);
            prop_assert_eq!(&once, &twice);
            for w in once.windows(2) {
                prop_assert!(w[0].segment.start <= w[1].segment.start);
                prop_assert!(!touches(&w[0].segment, &w[1].segment));
            }
        }

        #[test]
        fn order_independent(c in arb_candidates(), t in 0.05f64..=1.0, key in any::<u64>()) {
            let mut shuffled = c.clone();
            shuffled.sort_by_key(|x| crate::seed::splitmix64(key ^ x.segment.start.to_bits() ^ x.window_start_s.to_bits().rotate_left(7)));
            prop_assert_eq!(temporal_nms(&c, t), temporal_nms(&shuffled, t));
        }
    }
}
