use serde::{Deserialize, Serialize};

use crate::segment::Segment;

/// A segment in integer nanoseconds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NsSegment {
    pub start: i64,
    pub end: i64,
}

impl NsSegment {
    pub fn new(start: i64, end: i64) -> Self {
        NsSegment { start, end }
    }

    pub fn is_point(&self) -> bool {
        self.start == self.end
    }

    pub fn intersection(&self, o: &NsSegment) -> i64 {
        (self.end.min(o.end) - self.start.max(o.start)).max(0)
    }

    /// Closed-interval membership.
    pub fn contains(&self, t: i64) -> bool {
        self.start <= t && t <= self.end
    }

    pub fn hull(&self, o: &NsSegment) -> NsSegment {
        NsSegment::new(self.start.min(o.start), self.end.max(o.end))
    }

    pub fn to_segment(self) -> Segment {
        Segment::new(self.start as f64 * 1e-9, self.end as f64 * 1e-9)
    }
}

pub fn to_ns(seg: &Segment) -> NsSegment {
    let q = |t: f64| (t * 1e9).round() as i64;
    NsSegment::new(q(seg.start), q(seg.end))
}

/// Widens a segment by `tau` on both sides, within `[0, duration]`.
pub fn expand(seg: &Segment, tau: f64, duration: f64) -> Segment {
    Segment::new((seg.start - tau).max(0.0), (seg.end + tau).min(duration))
}

pub(crate) fn expand_ns(seg: &NsSegment, tau: i64, duration: i64) -> NsSegment {
    NsSegment::new((seg.start - tau).max(0), (seg.end + tau).min(duration))
}

/// Expanded segments merged into one matching unit, with the indices of the
/// original segments it covers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnionGroup {
    pub span: NsSegment,
    pub members: Vec<usize>,
}

fn joins(a: &NsSegment, b: &NsSegment) -> bool {
    if a.intersection(b) > 0 {
        return true;
    }
    let strictly_inside = |p: &NsSegment, q: &NsSegment| p.is_point() && q.start < p.start && p.start < q.end;
    strictly_inside(a, b) || strictly_inside(b, a) || (a.is_point() && a == b)
}

/// Unions segments that overlap by a positive amount, a zero-length segment
/// strictly inside another, or identical zero-length segments. Output is
/// sorted by start.
pub fn union_segments(segs: &[NsSegment]) -> Vec<UnionGroup> {
    let mut idx: Vec<usize> = (0..segs.len()).collect();
    idx.sort_by_key(|&i| (segs[i].start, segs[i].end, i));
    let mut out: Vec<UnionGroup> = Vec::new();
    for i in idx {
        match out.last_mut() {
            Some(g) if joins(&g.span, &segs[i]) => {
                g.span = g.span.hull(&segs[i]);
                g.members.push(i);
            }
            _ => out.push(UnionGroup {
                span: segs[i],
                members: vec![i],
            }),
        }
    }
    for g in &mut out {
        g.members.sort_unstable();
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchPair {
    pub pred: usize,
    pub gt: usize,
    pub intersection_ns: i64,
}

impl MatchPair {
    pub fn intersection_s(&self) -> f64 {
        self.intersection_ns as f64 * 1e-9
    }
}

/// One-to-one pairing of predictions and ground truths.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchSet {
    pub pairs: Vec<MatchPair>,
    pub unmatched_preds: Vec<usize>,
    pub unmatched_gts: Vec<usize>,
}

/// Whether a pair may be matched: a strictly positive intersection, or a
/// zero-length segment lying within the other's closed interval.
pub(crate) fn eligible(p: &NsSegment, g: &NsSegment) -> Option<i64> {
    let inter = p.intersection(g);
    if inter > 0 || (p.is_point() && g.contains(p.start)) || (g.is_point() && p.contains(g.start)) {
        Some(inter)
    } else {
        None
    }
}

/// Greedy matching by descending intersection; ties go to the earlier
/// ground-truth start, then the earlier prediction start.
pub fn greedy_match(preds: &[NsSegment], gts: &[NsSegment]) -> MatchSet {
    let mut cands = Vec::new();
    for (pi, p) in preds.iter().enumerate() {
        for (gi, g) in gts.iter().enumerate() {
            if let Some(inter) = eligible(p, g) {
                cands.push((inter, gi, pi));
            }
        }
    }
    cands.sort_by(|a, b| {
        b.0.cmp(&a.0)
            .then(gts[a.1].start.cmp(&gts[b.1].start))
            .then(preds[a.2].start.cmp(&preds[b.2].start))
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    let mut pred_used = vec![false; preds.len()];
    let mut gt_used = vec![false; gts.len()];
    let mut pairs = Vec::new();
    for (inter, gi, pi) in cands {
        if !pred_used[pi] && !gt_used[gi] {
            pred_used[pi] = true;
            gt_used[gi] = true;
            pairs.push(MatchPair {
                pred: pi,
                gt: gi,
                intersection_ns: inter,
            });
        }
    }
    MatchSet {
        pairs,
        unmatched_preds: (0..preds.len()).filter(|&i| !pred_used[i]).collect(),
        unmatched_gts: (0..gts.len()).filter(|&i| !gt_used[i]).collect(),
    }
}
