//! Per-effect frame composition.
//!
//! Every effect maps `(outgoing, incoming, p)` to a frame with
//! `p = 0 -> outgoing` and `p = 1 -> incoming`, byte for byte. Geometry uses
//! pixel centers `(x + 0.5, y + 0.5)` unless an effect states otherwise.

use std::f64::consts::TAU;

use super::catalog::{Corner, EffectId, Family, Motion, Origin};
use crate::error::{Error, Result};
use crate::seed::{derive_seed, splitmix64, unit_f64};
use crate::video::Frame;

const SLICE_WIDTH: u32 = 16;
const WIND_JITTER: f64 = 0.5;

pub fn render_transition_named(
    outgoing: &Frame,
    incoming: &Frame,
    effect: &str,
    p: f64,
    seed: u64,
) -> Result<Frame> {
    render_transition(outgoing, incoming, EffectId::from_name(effect)?, p, seed)
}

pub fn render_transition(
    outgoing: &Frame,
    incoming: &Frame,
    effect: EffectId,
    p: f64,
    seed: u64,
) -> Result<Frame> {
    if outgoing.dims() != incoming.dims() {
        return Err(Error::pre(format!(
            "frame sizes differ: {:?} vs {:?}",
            outgoing.dims(),
            incoming.dims()
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::pre(format!("progress {p} outside [0, 1]")));
    }
    let (a, b) = (outgoing, incoming);
    let frame = match effect.family() {
        Family::Cut => if p < 0.5 { a.clone() } else { b.clone() },
        Family::Fade => blend(a, b, p),
        Family::FadeCurve { gamma } => blend(a, b, p.powf(gamma)),
        Family::Dissolve => {
            let w = a.width();
            select(a, b, |x, y| pixel_noise(seed, x, y, w) < p)
        }
        Family::FadeThrough(rgb) => {
            let solid = Frame::solid(a.width(), a.height(), rgb);
            through(a, &solid, b, p)
        }
        Family::FadeGrays => through(a, &desaturate(a), b, p),
        Family::Distance => distance_blend(a, b, p),
        Family::Wipe(origin) => {
            let (w, h) = dims_f(a);
            select(a, b, |x, y| match origin {
                Origin::Right => x as f64 >= w * (1.0 - p),
                Origin::Left => (x as f64) < w * p,
                Origin::Bottom => y as f64 >= h * (1.0 - p),
                Origin::Top => (y as f64) < h * p,
            })
        }
        Family::CornerWipe(towards) => {
            let (w, h) = dims_f(a);
            let from_right = |x: u32| x as f64 >= w * (1.0 - p);
            let from_left = |x: u32| (x as f64) < w * p;
            let from_bottom = |y: u32| y as f64 >= h * (1.0 - p);
            let from_top = |y: u32| (y as f64) < h * p;
            select(a, b, |x, y| match towards {
                Corner::TopLeft => from_right(x) && from_bottom(y),
                Corner::TopRight => from_left(x) && from_bottom(y),
                Corner::BottomLeft => from_right(x) && from_top(y),
                Corner::BottomRight => from_left(x) && from_top(y),
            })
        }
        Family::Diagonal(from) => {
            let (w, h) = dims_f(a);
            let (wi, hi) = a.dims();
            select(a, b, |x, y| {
                let (x, y) = mirror_to_top_left(from, x, y, wi, hi);
                (x as f64 / w + y as f64 / h) * 0.5 < p
            })
        }
        Family::Slide(m) => push(a, b, m, p),
        Family::Smooth(m) => push(a, b, m, p * p * (3.0 - 2.0 * p)),
        Family::Cover(m) => cover(a, b, m, p),
        Family::Reveal(m) => reveal(a, b, m, p),
        Family::CircleOpen => {
            let g = Geometry::of(a);
            select(a, b, |x, y| g.radius(x, y) < p * g.max_radius)
        }
        Family::CircleClose => {
            let g = Geometry::of(a);
            select(a, b, |x, y| g.radius(x, y) >= (1.0 - p) * g.max_radius)
        }
        Family::CircleCrop => {
            let g = Geometry::of(a);
            crop_through_black(a, b, p, |x, y, r| g.radius(x, y) < r * g.max_radius)
        }
        Family::RectCrop => {
            let g = Geometry::of(a);
            crop_through_black(a, b, p, |x, y, r| g.chebyshev(x, y) < r)
        }
        Family::VertOpen => {
            let g = Geometry::of(a);
            select(a, b, |x, _| g.dx(x).abs() < p * g.cx)
        }
        Family::VertClose => {
            let g = Geometry::of(a);
            select(a, b, |x, _| g.dx(x).abs() >= (1.0 - p) * g.cx)
        }
        Family::HorzOpen => {
            let g = Geometry::of(a);
            select(a, b, |_, y| g.dy(y).abs() < p * g.cy)
        }
        Family::HorzClose => {
            let g = Geometry::of(a);
            select(a, b, |_, y| g.dy(y).abs() >= (1.0 - p) * g.cy)
        }
        Family::Radial => {
            let g = Geometry::of(a);
            let sweep = TAU * p;
            select(a, b, |x, y| {
                // clockwise from twelve o'clock
                let mut theta = g.dx(x).atan2(-g.dy(y));
                if theta < 0.0 {
                    theta += TAU;
                }
                if theta >= TAU {
                    theta = 0.0;
                }
                theta < sweep
            })
        }
        Family::Slice(origin) => slices(a, b, origin, p),
        Family::Wind(origin) => wind(a, b, origin, p, seed),
        Family::SqueezeH => squeeze(a, b, 1.0 - p, true),
        Family::SqueezeV => squeeze(a, b, 1.0 - p, false),
        Family::ZoomIn => {
            let g = Geometry::of(a);
            let z = 1.0 + p;
            let zoomed = Frame::from_fn(a.width(), a.height(), |x, y| {
                let sx = g.sample_x((x as f64 + 0.5 - g.cx) / z + g.cx);
                let sy = g.sample_y((y as f64 + 0.5 - g.cy) / z + g.cy);
                a.pixel(sx, sy)
            });
            blend(&zoomed, b, p)
        }
        Family::HBlur => {
            let mixed = blend(a, b, p);
            let radius = (blur_strength(p) * 16.0).ceil() as u32;
            box_blur_h(&mixed, radius)
        }
        Family::Pixelize => {
            let mixed = blend(a, b, p);
            let side = ((blur_strength(p) * 32.0).ceil() as u32).max(1);
            pixelate(&mixed, side)
        }
    };
    Ok(frame)
}

fn dims_f(f: &Frame) -> (f64, f64) {
    (f.width() as f64, f.height() as f64)
}

/// `4p(1-p)`: zero at both ends, peak 1 at the midpoint.
fn blur_strength(p: f64) -> f64 {
    4.0 * p * (1.0 - p)
}

#[inline]
fn mix(a: u8, b: u8, w: f64) -> u8 {
    (a as f64 * (1.0 - w) + b as f64 * w).round().clamp(0.0, 255.0) as u8
}

fn blend(a: &Frame, b: &Frame, w: f64) -> Frame {
    let data = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(&x, &y)| mix(x, y, w))
        .collect();
    Frame::new(a.width(), a.height(), data).expect("same-size blend")
}

/// Two-stage fade `a -> mid -> b`, reaching `mid` at `p = 0.5`.
fn through(a: &Frame, mid: &Frame, b: &Frame, p: f64) -> Frame {
    if p < 0.5 {
        blend(a, mid, 2.0 * p)
    } else {
        blend(mid, b, 2.0 * p - 1.0)
    }
}

fn desaturate(f: &Frame) -> Frame {
    let mut out = f.clone();
    for px in out.data_mut().chunks_exact_mut(3) {
        let y = crate::video::frame_luma(px[0], px[1], px[2]);
        px.fill(y);
    }
    out
}

/// Pixels switch once `2p` exceeds their normalized RGB distance, so similar
/// regions change first.
fn distance_blend(a: &Frame, b: &Frame, p: f64) -> Frame {
    let norm = 255.0 * 3f64.sqrt();
    let mut data = Vec::with_capacity(a.data().len());
    for (pa, pb) in a.data().chunks_exact(3).zip(b.data().chunks_exact(3)) {
        let d2: f64 = pa
            .iter()
            .zip(pb)
            .map(|(&u, &v)| (u as f64 - v as f64).powi(2))
            .sum();
        let w = (2.0 * p - d2.sqrt() / norm).clamp(0.0, 1.0);
        data.extend(pa.iter().zip(pb).map(|(&u, &v)| mix(u, v, w)));
    }
    Frame::new(a.width(), a.height(), data).expect("same-size blend")
}

/// Picks the incoming pixel where `take_b` holds.
fn select(a: &Frame, b: &Frame, mut take_b: impl FnMut(u32, u32) -> bool) -> Frame {
    Frame::from_fn(a.width(), a.height(), |x, y| {
        if take_b(x, y) {
            b.pixel(x, y)
        } else {
            a.pixel(x, y)
        }
    })
}

fn pixel_noise(seed: u64, x: u32, y: u32, width: u32) -> f64 {
    unit_f64(splitmix64(seed ^ splitmix64(y as u64 * width as u64 + x as u64)))
}

fn mirror_to_top_left(corner: Corner, x: u32, y: u32, w: u32, h: u32) -> (u32, u32) {
    match corner {
        Corner::TopLeft => (x, y),
        Corner::TopRight => (w - 1 - x, y),
        Corner::BottomLeft => (x, h - 1 - y),
        Corner::BottomRight => (w - 1 - x, h - 1 - y),
    }
}

struct Geometry {
    w: u32,
    h: u32,
    cx: f64,
    cy: f64,
    max_radius: f64,
}

impl Geometry {
    fn of(f: &Frame) -> Self {
        let (w, h) = dims_f(f);
        let (cx, cy) = (w / 2.0, h / 2.0);
        Geometry {
            w: f.width(),
            h: f.height(),
            cx,
            cy,
            max_radius: cx.hypot(cy),
        }
    }

    fn dx(&self, x: u32) -> f64 {
        x as f64 + 0.5 - self.cx
    }

    fn dy(&self, y: u32) -> f64 {
        y as f64 + 0.5 - self.cy
    }

    fn radius(&self, x: u32, y: u32) -> f64 {
        self.dx(x).hypot(self.dy(y))
    }

    /// Normalized L-infinity distance from the center, in `[0, 1)`.
    fn chebyshev(&self, x: u32, y: u32) -> f64 {
        (self.dx(x).abs() / self.cx).max(self.dy(y).abs() / self.cy)
    }

    fn sample_x(&self, sx: f64) -> u32 {
        (sx.floor().max(0.0) as u32).min(self.w - 1)
    }

    fn sample_y(&self, sy: f64) -> u32 {
        (sy.floor().max(0.0) as u32).min(self.h - 1)
    }
}

/// Outgoing shrinks to black inside a mask, then the incoming grows out of
/// it. `inside(x, y, r)` tests membership at relative size `r`.
fn crop_through_black(
    a: &Frame,
    b: &Frame,
    p: f64,
    inside: impl Fn(u32, u32, f64) -> bool,
) -> Frame {
    let (src, r) = if p < 0.5 { (a, 1.0 - 2.0 * p) } else { (b, 2.0 * p - 1.0) };
    Frame::from_fn(a.width(), a.height(), |x, y| {
        if inside(x, y, r) {
            src.pixel(x, y)
        } else {
            [0, 0, 0]
        }
    })
}

/// Axis helper: maps `(along, across)` coordinates back to `(x, y)`.
fn along_axis(horizontal: bool, along: u32, across: u32) -> (u32, u32) {
    if horizontal {
        (along, across)
    } else {
        (across, along)
    }
}

fn motion_axis(m: Motion) -> (bool, bool) {
    // (horizontal, moves toward lower coordinates)
    match m {
        Motion::Left => (true, true),
        Motion::Right => (true, false),
        Motion::Up => (false, true),
        Motion::Down => (false, false),
    }
}

/// Shared driver for translation effects. `pick(along, offset, extent)`
/// returns which frame to sample and at which coordinate along the axis.
fn translate(
    a: &Frame,
    b: &Frame,
    m: Motion,
    p: f64,
    pick: impl Fn(i64, i64, i64, bool) -> (bool, i64),
) -> Frame {
    let (horizontal, negative) = motion_axis(m);
    let extent = if horizontal { a.width() } else { a.height() } as i64;
    let offset = (p * extent as f64).floor() as i64;
    Frame::from_fn(a.width(), a.height(), |x, y| {
        let (along, across) = if horizontal { (x, y) } else { (y, x) };
        let (use_b, pos) = pick(along as i64, offset, extent, negative);
        let (sx, sy) = along_axis(horizontal, pos as u32, across);
        if use_b {
            b.pixel(sx, sy)
        } else {
            a.pixel(sx, sy)
        }
    })
}

/// Both frames move together; the incoming follows the outgoing in.
fn push(a: &Frame, b: &Frame, m: Motion, p: f64) -> Frame {
    translate(a, b, m, p, |v, o, n, negative| {
        if negative {
            let src = v + o;
            if src < n { (false, src) } else { (true, src - n) }
        } else {
            let src = v - o;
            if src >= 0 { (false, src) } else { (true, src + n) }
        }
    })
}

/// The incoming frame slides in over a stationary outgoing frame.
fn cover(a: &Frame, b: &Frame, m: Motion, p: f64) -> Frame {
    translate(a, b, m, p, |v, o, n, negative| {
        if negative {
            if v >= n - o { (true, v - (n - o)) } else { (false, v) }
        } else if v < o {
            (true, v + n - o)
        } else {
            (false, v)
        }
    })
}

/// The outgoing frame slides away, uncovering a stationary incoming frame.
fn reveal(a: &Frame, b: &Frame, m: Motion, p: f64) -> Frame {
    translate(a, b, m, p, |v, o, n, negative| {
        let src = if negative { v + o } else { v - o };
        if (0..n).contains(&src) { (false, src) } else { (true, v) }
    })
}

/// `(distance from origin edge, extent along the sweep, coordinate across it)`.
fn sweep_coords(origin: Origin, x: u32, y: u32, w: u32, h: u32) -> (u32, u32, u32) {
    match origin {
        Origin::Left => (x, w, y),
        Origin::Right => (w - 1 - x, w, y),
        Origin::Top => (y, h, x),
        Origin::Bottom => (h - 1 - y, h, x),
    }
}

/// 16px strips stacked along the sweep; strip `i` of `n` starts at
/// `p = i / (2n)` and fills from the origin side.
fn slices(a: &Frame, b: &Frame, origin: Origin, p: f64) -> Frame {
    let (w, h) = a.dims();
    select(a, b, |x, y| {
        let (along, extent, _) = sweep_coords(origin, x, y, w, h);
        let n = extent.div_ceil(SLICE_WIDTH);
        let i = along / SLICE_WIDTH;
        let strip_w = SLICE_WIDTH.min(extent - i * SLICE_WIDTH);
        let q = (2.0 * p - i as f64 / n as f64).clamp(0.0, 1.0);
        let local = (along - i * SLICE_WIDTH) as f64 + 0.5;
        local / (strip_w as f64) < q
    })
}

/// One-pixel lines across the sweep, each with its own seeded delay.
fn wind(a: &Frame, b: &Frame, origin: Origin, p: f64, seed: u64) -> Frame {
    let (w, h) = a.dims();
    select(a, b, |x, y| {
        let (along, extent, line) = sweep_coords(origin, x, y, w, h);
        let jitter = unit_f64(derive_seed(seed, line as u64));
        let q = (p * (1.0 + WIND_JITTER) - WIND_JITTER * jitter).clamp(0.0, 1.0);
        (along as f64 + 0.5) / (extent as f64) < q
    })
}

/// Nearest-neighbour squeeze of the outgoing frame to `scale` of its size
/// about the center, over the incoming frame.
fn squeeze(a: &Frame, b: &Frame, scale: f64, horizontal: bool) -> Frame {
    if scale <= 0.0 {
        return b.clone();
    }
    let g = Geometry::of(a);
    Frame::from_fn(a.width(), a.height(), |x, y| {
        let (d, c) = if horizontal { (g.dx(x), g.cx) } else { (g.dy(y), g.cy) };
        if d.abs() >= scale * c {
            return b.pixel(x, y);
        }
        let src = d / scale + c;
        if horizontal {
            a.pixel(g.sample_x(src), y)
        } else {
            a.pixel(x, g.sample_y(src))
        }
    })
}

fn box_blur_h(f: &Frame, radius: u32) -> Frame {
    if radius == 0 {
        return f.clone();
    }
    let (w, h) = f.dims();
    let r = radius as i64;
    let mut out = f.clone();
    let row_len = w as usize * 3;
    for y in 0..h as usize {
        let row = &f.data()[y * row_len..(y + 1) * row_len];
        // prefix sums per channel
        let mut prefix = vec![[0u32; 3]; w as usize + 1];
        for x in 0..w as usize {
            for c in 0..3 {
                prefix[x + 1][c] = prefix[x][c] + row[x * 3 + c] as u32;
            }
        }
        let dst = &mut out.data_mut()[y * row_len..(y + 1) * row_len];
        for x in 0..w as i64 {
            let lo = (x - r).max(0) as usize;
            let hi = (x + r).min(w as i64 - 1) as usize + 1;
            let n = (hi - lo) as f64;
            for c in 0..3 {
                let sum = (prefix[hi][c] - prefix[lo][c]) as f64;
                dst[x as usize * 3 + c] = (sum / n).round() as u8;
            }
        }
    }
    out
}

fn pixelate(f: &Frame, side: u32) -> Frame {
    if side <= 1 {
        return f.clone();
    }
    let (w, h) = f.dims();
    let mut out = f.clone();
    for by in (0..h).step_by(side as usize) {
        for bx in (0..w).step_by(side as usize) {
            let (ex, ey) = ((bx + side).min(w), (by + side).min(h));
            let mut sum = [0u32; 3];
            for y in by..ey {
                for x in bx..ex {
                    let px = f.pixel(x, y);
                    for c in 0..3 {
                        sum[c] += px[c] as u32;
                    }
                }
            }
            let n = ((ex - bx) * (ey - by)) as f64;
            let mean = sum.map(|s| (s as f64 / n).round() as u8);
            for y in by..ey {
                for x in bx..ex {
                    out.set_pixel(x, y, mean);
                }
            }
        }
    }
    out
}
