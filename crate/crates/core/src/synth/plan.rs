use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::catalog::{Easing, EffectId, CATALOG_SIZE};
use crate::error::{Error, Result};
use crate::seed::derive_seed;
use crate::video::{Fps, VideoClip};

/// Longest transition allowed between shots lasting `dur_a` and `dur_b`
/// seconds: `min(cap, dur_a / 2, dur_b / 2)`.
pub fn compute_tmax(dur_a: f64, dur_b: f64, cap: f64) -> Result<f64> {
    if !(dur_a > 0.0 && dur_b > 0.0 && cap > 0.0) {
        return Err(Error::pre(format!(
            "durations and cap must be positive, got ({dur_a}, {dur_b}, cap {cap})"
        )));
    }
    Ok(cap.min(0.5 * dur_a).min(0.5 * dur_b))
}

/// One planned transition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectSpec {
    pub effect: EffectId,
    /// Frame-aligned duration; exactly 0 for cuts.
    pub duration_s: f64,
    pub seed: u64,
    pub easing: Easing,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthPlan {
    pub seed: u64,
    /// `specs[i]` joins shot `i` and shot `i + 1`.
    pub specs: Vec<EffectSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DurationMode {
    /// `d ~ U(0, T_max)`.
    Uniform,
    /// With probability `long_fraction` draw a duration above one second
    /// (when `T_max` allows it); otherwise `d ~ U(0, min(T_max, 1))`.
    Stratified { long_fraction: f64 },
}

#[derive(Clone, Debug)]
pub struct PlanOptions {
    pub cap: f64,
    pub durations: DurationMode,
    /// Cycle through these effects instead of drawing uniformly.
    pub effect_cycle: Option<Vec<EffectId>>,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions {
            cap: super::DEFAULT_CAP_S,
            durations: DurationMode::Uniform,
            effect_cycle: None,
        }
    }
}

pub(crate) fn check_shots(shots: &[VideoClip]) -> Result<((u32, u32), Fps)> {
    if shots.len() < 2 {
        return Err(Error::pre(format!("need at least 2 shots, got {}", shots.len())));
    }
    let first = &shots[0];
    let dims = first
        .dims()
        .ok_or_else(|| Error::pre("shot 0 has no frames"))?;
    for (i, s) in shots.iter().enumerate() {
        if s.dims() != Some(dims) || s.fps() != first.fps() {
            return Err(Error::Inconsistent(format!(
                "shot {i} does not match shot 0 in size or frame rate"
            )));
        }
    }
    Ok((dims, first.fps()))
}

/// Draws effect and duration for every adjacent shot pair. Pure in the shot
/// durations, `seed` and `opts`.
pub fn sample_plan(shots: &[VideoClip], seed: u64, opts: &PlanOptions) -> Result<SynthPlan> {
    let (_, fps) = check_shots(shots)?;
    if let DurationMode::Stratified { long_fraction } = opts.durations {
        if !(0.0..=1.0).contains(&long_fraction) {
            return Err(Error::pre(format!("long fraction {long_fraction} outside [0, 1]")));
        }
    }
    if opts.effect_cycle.as_ref().is_some_and(Vec::is_empty) {
        return Err(Error::pre("effect cycle is empty"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let specs = shots
        .windows(2)
        .enumerate()
        .map(|(i, pair)| {
            let tmax = compute_tmax(pair[0].duration(), pair[1].duration(), opts.cap)?;
            let effect = match &opts.effect_cycle {
                Some(cycle) => cycle[i % cycle.len()],
                None => EffectId::from_index(rng.random_range(0..CATALOG_SIZE)).expect("in range"),
            };
            let frames = sample_frames(&mut rng, fps, tmax, opts.durations);
            let duration_s = if effect.is_cut() { 0.0 } else { fps.frame_time(frames) };
            Ok(EffectSpec {
                effect,
                duration_s,
                seed: derive_seed(seed, i as u64),
                easing: effect.easing(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SynthPlan { seed, specs })
}

fn sample_frames(rng: &mut ChaCha8Rng, fps: Fps, tmax: f64, mode: DurationMode) -> u64 {
    let max_frames = fps.frames_floor(tmax);
    match mode {
        DurationMode::Uniform => fps.frames_floor(rng.random_range(0.0..=tmax)).min(max_frames),
        DurationMode::Stratified { long_fraction } => {
            let long_min = fps.frames_floor(1.0) + 1;
            let want_long = rng.random_bool(long_fraction);
            if want_long && long_min <= max_frames {
                rng.random_range(long_min..=max_frames)
            } else {
                let upper = tmax.min(1.0);
                fps.frames_floor(rng.random_range(0.0..=upper)).min(max_frames)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::video::Frame;

    fn shot(seconds: u32, fps: u32) -> VideoClip {
        let frames = vec![Frame::solid(2, 2, [0; 3]); (seconds * fps) as usize];
        VideoClip::new(frames, Fps::integer(fps)).unwrap()
    }

    #[test]
    fn tmax_examples() {
        assert_eq!(compute_tmax(8.0, 6.0, 3.0).unwrap(), 3.0);
        assert_eq!(compute_tmax(2.0, 10.0, 3.0).unwrap(), 1.0);
        assert_eq!(compute_tmax(0.2, 0.2, 3.0).unwrap(), 0.1);
        assert!(compute_tmax(0.0, 1.0, 3.0).is_err());
        assert!(compute_tmax(1.0, -1.0, 3.0).is_err());
        assert!(compute_tmax(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn plans_are_deterministic() {
        let shots = vec![shot(4, 25), shot(6, 25), shot(5, 25)];
        let a = sample_plan(&shots, 42, &PlanOptions::default()).unwrap();
        let b = sample_plan(&shots, 42, &PlanOptions::default()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_plan(&shots, 43, &PlanOptions::default()).unwrap());
    }

    #[test]
    fn cuts_have_zero_duration_and_all_respect_tmax() {
        let shots = vec![shot(4, 25), shot(3, 25)];
        let tmax = compute_tmax(4.0, 3.0, 3.0).unwrap();
        let mut cuts = 0;
        for seed in 0..3000 {
            let plan = sample_plan(&shots, seed, &PlanOptions::default()).unwrap();
            let spec = &plan.specs[0];
            assert!(spec.duration_s >= 0.0 && spec.duration_s <= tmax);
            // frame aligned
            assert!((spec.duration_s * 25.0 - (spec.duration_s * 25.0).round()).abs() < 1e-9);
            if spec.effect.is_cut() {
                cuts += 1;
                assert_eq!(spec.duration_s, 0.0);
            }
        }
        assert!(cuts > 0);
    }

    #[test]
    fn stratified_mode_hits_requested_long_share() {
        let shots = vec![shot(6, 25), shot(6, 25)];
        let opts = PlanOptions {
            durations: DurationMode::Stratified { long_fraction: 0.6 },
            effect_cycle: Some(vec![EffectId::FADE]),
            ..PlanOptions::default()
        };
        let n = 2000;
        let long = (0..n)
            .filter(|&s| sample_plan(&shots, s, &opts).unwrap().specs[0].duration_s > 1.0)
            .count();
        let share = long as f64 / n as f64;
        // binomial sd at n=2000 is ~0.011
        assert!((share - 0.6).abs() < 0.05, "{share}");
    }

    #[test]
    fn rejects_short_or_mixed_shot_lists() {
        assert!(matches!(sample_plan(&[shot(2, 25)], 0, &PlanOptions::default()), Err(Error::Precondition(_))));
        assert!(matches!(
            sample_plan(&[shot(2, 25), shot(2, 30)], 0, &PlanOptions::default()),
            Err(Error::Inconsistent(_))
        ));
    }
}
