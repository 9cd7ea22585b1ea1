use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{canonicalize, DetectionResult};
use crate::error::{Error, Result};
use crate::seed::derive_seed;
use crate::segment::{Segment, TransitionLabel};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleParams {
    pub jitter_s: f64,
    pub drop_prob: f64,
    pub seed: u64,
}

/// Ground truth with each boundary moved by `U(-jitter, jitter)` and each
/// segment dropped with probability `drop_prob`, kept within
/// `[0, duration_s]`. A label's draws depend only on its index and `seed`.
pub fn oracle_segments(labels: &[TransitionLabel], p: &OracleParams, duration_s: f64) -> Result<Vec<Segment>> {
    if !(p.jitter_s >= 0.0) || !p.jitter_s.is_finite() {
        return Err(Error::pre(format!("jitter {} must be finite and non-negative", p.jitter_s)));
    }
    if !(0.0..=1.0).contains(&p.drop_prob) {
        return Err(Error::pre(format!("drop probability {} outside [0, 1]", p.drop_prob)));
    }
    let mut out = Vec::with_capacity(labels.len());
    for (i, label) in labels.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(p.seed, i as u64));
        let dropped = rng.random::<f64>() < p.drop_prob;
        let mut draw = || {
            if p.jitter_s > 0.0 {
                rng.random_range(-p.jitter_s..=p.jitter_s)
            } else {
                0.0
            }
        };
        let (ds, de) = (draw(), draw());
        if dropped {
            continue;
        }
        let mut start = (label.start + ds).clamp(0.0, duration_s);
        let mut end = (label.end + de).clamp(0.0, duration_s);
        if start > end {
            let mid = 0.5 * (start + end);
            start = mid;
            end = mid;
        }
        out.push(Segment::new(start, end));
    }
    Ok(canonicalize(out))
}

/// Whole-clip oracle detection.
pub fn oracle_detector(labels: &[TransitionLabel], p: &OracleParams, duration_s: f64) -> Result<DetectionResult> {
    let t0 = std::time::Instant::now();
    let segments = oracle_segments(labels, p, duration_s)?;
    Ok(DetectionResult {
        segments,
        wall_time_s: t0.elapsed().as_secs_f64(),
        io_time_s: 0.0,
    })
}
