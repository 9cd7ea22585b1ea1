use serde::{Deserialize, Serialize};

/// A temporal span `[start, end]` in seconds.
///
/// A zero-length segment (`start == end`) is an instantaneous cut.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
}

impl Segment {
    pub const fn new(start: f64, end: f64) -> Self {
        Segment { start, end }
    }

    pub fn duration(&self) -> f64 {
        self.end - self.start
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.start + self.end)
    }

    pub fn is_valid(&self) -> bool {
        self.start.is_finite() && self.end.is_finite() && self.start <= self.end
    }

    /// Length of the overlap with `other`, zero when disjoint or touching.
    pub fn intersection(&self, other: &Segment) -> f64 {
        (self.end.min(other.end) - self.start.max(other.start)).max(0.0)
    }

    /// Temporal IoU. Two identical zero-length segments count as duplicates
    /// (IoU 1); any other pair with an empty union has IoU 0.
    pub fn iou(&self, other: &Segment) -> f64 {
        let inter = self.intersection(other);
        let union = self.end.max(other.end) - self.start.min(other.start);
        if union <= 0.0 {
            return if self.start == other.start { 1.0 } else { 0.0 };
        }
        inter / union
    }

    pub fn shifted(&self, offset: f64) -> Segment {
        Segment::new(self.start + offset, self.end + offset)
    }
}

/// Ground-truth transition: a segment plus the effect identifier that
/// produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionLabel {
    pub start: f64,
    pub end: f64,
    #[serde(rename = "type")]
    pub kind: String,
}

impl TransitionLabel {
    pub fn new(start: f64, end: f64, kind: impl Into<String>) -> Self {
        TransitionLabel {
            start,
            end,
            kind: kind.into(),
        }
    }

    pub fn segment(&self) -> Segment {
        Segment::new(self.start, self.end)
    }

    pub fn duration(&self) -> f64 {
        self.end - self.start
    }
}
