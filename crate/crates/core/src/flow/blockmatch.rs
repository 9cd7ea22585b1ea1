use crate::error::{Error, Result};
use crate::video::{to_grayscale, Frame, LumaPlane};

pub const DEFAULT_BLOCK: u32 = 16;
pub const DEFAULT_RADIUS: u32 = 7;

/// Dense per-pixel motion `(dx, dy)` in pixels, stored interleaved.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowField {
    width: u32,
    height: u32,
    vectors: Vec<f64>,
}

impl FlowField {
    pub fn new(width: u32, height: u32, vectors: Vec<f64>) -> Result<Self> {
        if vectors.len() != width as usize * height as usize * 2 {
            return Err(Error::pre(format!(
                "{} flow components for a {width}x{height} field",
                vectors.len()
            )));
        }
        if vectors.iter().any(|v| !v.is_finite()) {
            return Err(Error::pre("flow vectors must be finite"));
        }
        Ok(FlowField { width, height, vectors })
    }

    pub fn zeros(width: u32, height: u32) -> Self {
        FlowField {
            width,
            height,
            vectors: vec![0.0; width as usize * height as usize * 2],
        }
    }

    pub fn uniform(width: u32, height: u32, dx: f64, dy: f64) -> Self {
        FlowField {
            width,
            height,
            vectors: [dx, dy].repeat(width as usize * height as usize),
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn vectors(&self) -> &[f64] {
        &self.vectors
    }

    pub fn at(&self, x: u32, y: u32) -> (f64, f64) {
        let i = (y as usize * self.width as usize + x as usize) * 2;
        (self.vectors[i], self.vectors[i + 1])
    }

    pub fn max_magnitude(&self) -> f64 {
        self.vectors
            .chunks_exact(2)
            .map(|v| v[0].hypot(v[1]))
            .fold(0.0, f64::max)
    }

    pub fn negated(&self) -> FlowField {
        FlowField {
            width: self.width,
            height: self.height,
            vectors: self.vectors.iter().map(|v| -v).collect(),
        }
    }
}

/// Sum of absolute differences between a tile of `curr` and `prev` displaced
/// by `(dx, dy)`; reference reads clamp to the frame edge.
#[allow(clippy::too_many_arguments)]
fn tile_sad(prev: &LumaPlane, curr: &LumaPlane, tx: u32, ty: u32, tw: u32, th: u32, dx: i32, dy: i32) -> u64 {
    let max_x = prev.width as i64 - 1;
    let max_y = prev.height as i64 - 1;
    let mut sad = 0u64;
    for y in ty..ty + th {
        let ry = (y as i64 - dy as i64).clamp(0, max_y) as u32;
        for x in tx..tx + tw {
            let rx = (x as i64 - dx as i64).clamp(0, max_x) as u32;
            sad += (curr.at(x, y) as i32 - prev.at(rx, ry) as i32).unsigned_abs() as u64;
        }
    }
    sad
}

/// Exhaustive block matching of `curr` against `prev` on the luma plane.
///
/// Each `block`-sized tile (edge tiles may be smaller) gets the displacement
/// in `[-radius, radius]^2` with minimal SAD; ties go to the smallest
/// `|dx| + |dy|`, then smallest `dy`, then smallest `dx`. A tile moving
/// right by `k` pixels reports `dx = k`.
pub fn estimate_flow(prev: &Frame, curr: &Frame, block: u32, radius: u32) -> Result<FlowField> {
    if prev.dims() != curr.dims() {
        return Err(Error::pre(format!(
            "frame sizes differ: {:?} vs {:?}",
            prev.dims(),
            curr.dims()
        )));
    }
    if block < 4 {
        return Err(Error::pre(format!("block size {block} below 4")));
    }
    if radius < 1 {
        return Err(Error::pre("search radius must be at least 1"));
    }
    let (w, h) = prev.dims();
    let (gp, gc) = (to_grayscale(prev), to_grayscale(curr));
    let r = radius as i32;
    let mut field = FlowField::zeros(w, h);
    for ty in (0..h).step_by(block as usize) {
        let th = block.min(h - ty);
        for tx in (0..w).step_by(block as usize) {
            let tw = block.min(w - tx);
            let mut best = (u64::MAX, 0u32, 0i32, 0i32);
            for dy in -r..=r {
                for dx in -r..=r {
                    let sad = tile_sad(&gp, &gc, tx, ty, tw, th, dx, dy);
                    let key = (sad, dx.unsigned_abs() + dy.unsigned_abs(), dy, dx);
                    if key < best {
                        best = key;
                    }
                }
            }
            let (dx, dy) = (best.3 as f64, best.2 as f64);
            for y in ty..ty + th {
                for x in tx..tx + tw {
                    let i = (y as usize * w as usize + x as usize) * 2;
                    field.vectors[i] = dx;
                    field.vectors[i + 1] = dy;
                }
            }
        }
    }
    Ok(field)
}

/// Flow for every frame of a sequence against the frame `stride` steps
/// earlier; the first `stride` frames get zero flow.
pub fn flow_sequence(frames: &[Frame], stride: usize, block: u32, radius: u32) -> Result<Vec<FlowField>> {
    use rayon::prelude::*;
    if stride == 0 {
        return Err(Error::pre("flow pairing stride must be at least 1"));
    }
    (0..frames.len())
        .into_par_iter()
        .map(|i| {
            if i < stride {
                let (w, h) = frames[i].dims();
                Ok(FlowField::zeros(w, h))
            } else {
                estimate_flow(&frames[i - stride], &frames[i], block, radius)
            }
        })
        .collect()
}
