use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::video::{Fps, Frame, VideoClip};

/// A synthetic shot: two drifting sinusoidal color fields plus a moving box.
///
/// Content changes slowly within a shot while palettes differ strongly
/// between seeds, which is what a shot looks like to frame-difference
/// detectors and block-matching flow.
pub fn procedural_shot(seed: u64, width: u32, height: u32, fps: Fps, frames: usize) -> VideoClip {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut color = || [rng.random::<u8>(), rng.random::<u8>(), rng.random::<u8>()];
    let (c0, c1, c2, box_color) = (color(), color(), color(), color());
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let period = |rng: &mut ChaCha8Rng| 1.0 / rng.random_range(24.0..96.0);
    let (fx1, fy1, fx2, fy2) = (period(&mut rng), period(&mut rng), period(&mut rng), period(&mut rng));
    let (ph1, ph2) = (rng.random_range(0.0..TAU), rng.random_range(0.0..TAU));
    let (vx, vy) = (rng.random_range(-1.0..1.0), rng.random_range(-0.6..0.6));
    let box_w = (width / 5).max(1);
    let box_h = (height / 5).max(1);
    let (bx0, by0) = (rng.random_range(0.0..width as f64), rng.random_range(0.0..height as f64));
    let (bvx, bvy) = (rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));

    let frames = (0..frames)
        .map(|k| {
            let t = k as f64;
            let bx = (bx0 + bvx * t).rem_euclid(width as f64) as u32;
            let by = (by0 + bvy * t).rem_euclid(height as f64) as u32;
            Frame::from_fn(width, height, |x, y| {
                let in_box = x.wrapping_sub(bx) < box_w && y.wrapping_sub(by) < box_h;
                if in_box {
                    return box_color;
                }
                let u = x as f64 + vx * t;
                let v = y as f64 + vy * t;
                let w1 = 0.5 + 0.5 * (TAU * (fx1 * u + fy1 * v) + ph1).sin();
                let w2 = 0.5 + 0.5 * (TAU * (fx2 * u - fy2 * v) + ph2).sin();
                let mut px = [0u8; 3];
                for c in 0..3 {
                    let val = c0[c] as f64 * (1.0 - w1) + c1[c] as f64 * w1;
                    px[c] = (val * (1.0 - 0.35 * w2) + c2[c] as f64 * 0.35 * w2).round() as u8;
                }
                px
            })
        })
        .collect();
    VideoClip::new(frames, fps).expect("uniform frames")
}
