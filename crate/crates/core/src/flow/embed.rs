use ndarray::{concatenate, s, Array4, Array5, Axis};

use super::FusedFrame;
use crate::error::{Error, Result};
use crate::video::Frame;

/// First-layer patch-embedding weights, shaped
/// `(out_channels, in_channels, depth, height, width)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbedKernel {
    weights: Array5<f64>,
}

impl EmbedKernel {
    pub fn new(weights: Array5<f64>) -> Result<Self> {
        let ic = weights.shape()[1];
        if ic != 3 && ic != 6 {
            return Err(Error::pre(format!("in_channels must be 3 or 6, got {ic}")));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::pre("kernel weights must be finite"));
        }
        if weights.shape().contains(&0) {
            return Err(Error::pre("kernel dimensions must be positive"));
        }
        Ok(EmbedKernel { weights })
    }

    /// Deterministic pseudo-random weights in `[-1, 1)`.
    pub fn seeded(out_channels: usize, in_channels: usize, dims: (usize, usize, usize), seed: u64) -> Result<Self> {
        let (d, h, w) = dims;
        let mut n = 0u64;
        let weights = Array5::from_shape_fn((out_channels, in_channels, d, h, w), |_| {
            n += 1;
            crate::seed::unit_f64(crate::seed::derive_seed(seed, n)) * 2.0 - 1.0
        });
        Self::new(weights)
    }

    pub fn weights(&self) -> &Array5<f64> {
        &self.weights
    }

    pub fn out_channels(&self) -> usize {
        self.weights.shape()[0]
    }

    pub fn in_channels(&self) -> usize {
        self.weights.shape()[1]
    }

    /// `(depth, height, width)` of one patch.
    pub fn patch_dims(&self) -> (usize, usize, usize) {
        let sh = self.weights.shape();
        (sh[2], sh[3], sh[4])
    }

    /// Input channels `range` as a standalone kernel.
    pub fn slice_channels(&self, range: std::ops::Range<usize>) -> Result<Self> {
        if range.end > self.in_channels() {
            return Err(Error::pre("channel range out of bounds"));
        }
        Self::new(self.weights.slice(s![.., range, .., .., ..]).to_owned())
    }
}

/// Extends a 3-channel kernel to 6 channels by appending zero weights, so the
/// extra channels contribute nothing until trained.
pub fn extend_kernel_zero_pad(k3: &EmbedKernel) -> Result<EmbedKernel> {
    if k3.in_channels() != 3 {
        return Err(Error::pre(format!(
            "zero-pad extension needs a 3-channel kernel, got {}",
            k3.in_channels()
        )));
    }
    let zeros = Array5::<f64>::zeros(k3.weights.raw_dim());
    let weights = concatenate(Axis(1), &[k3.weights.view(), zeros.view()]).expect("shapes match");
    EmbedKernel::new(weights)
}

/// A `T x H x W x C` stack of 8-bit frames.
#[derive(Clone, Debug, PartialEq)]
pub struct PatchInput {
    frames: usize,
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<u8>,
}

impl PatchInput {
    fn stack<'a>(dims: Option<(u32, u32)>, channels: usize, parts: impl Iterator<Item = (&'a [u8], (u32, u32))>) -> Result<Self> {
        let (w, h) = dims.ok_or_else(|| Error::pre("patch input needs at least one frame"))?;
        let mut data = Vec::new();
        let mut frames = 0;
        for (bytes, d) in parts {
            if d != (w, h) {
                return Err(Error::pre("patch input frames differ in size"));
            }
            data.extend_from_slice(bytes);
            frames += 1;
        }
        Ok(PatchInput { frames, width: w as usize, height: h as usize, channels, data })
    }

    pub fn from_frames(frames: &[Frame]) -> Result<Self> {
        Self::stack(frames.first().map(Frame::dims), 3, frames.iter().map(|f| (f.data(), f.dims())))
    }

    pub fn from_fused(frames: &[FusedFrame]) -> Result<Self> {
        Self::stack(frames.first().map(FusedFrame::dims), 6, frames.iter().map(|f| (f.data(), f.dims())))
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    /// `(frames, height, width)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.frames, self.height, self.width)
    }

    fn at(&self, t: usize, y: usize, x: usize, c: usize) -> u8 {
        self.data[((t * self.height + y) * self.width + x) * self.channels + c]
    }
}

/// Non-overlapping 3D convolution with stride equal to the kernel size over
/// inputs scaled to `[0, 1]`. Returns tokens shaped
/// `(out_channels, T/Dk, H/Hk, W/Wk)`; trailing remainders are dropped.
pub fn patch_embed(input: &PatchInput, kernel: &EmbedKernel) -> Result<Array4<f64>> {
    if kernel.in_channels() != input.channels {
        return Err(Error::pre(format!(
            "kernel expects {} channels, input has {}",
            kernel.in_channels(),
            input.channels
        )));
    }
    let (dk, hk, wk) = kernel.patch_dims();
    let (t, h, w) = input.dims();
    if t < dk {
        return Err(Error::pre(format!("temporal depth {t} below kernel depth {dk}")));
    }
    let grid = (kernel.out_channels(), t / dk, h / hk, w / wk);
    let wts = &kernel.weights;
    Ok(Array4::from_shape_fn(grid, |(o, tz, ty, tx)| {
        let mut acc = 0.0;
        for c in 0..input.channels {
            for dz in 0..dk {
                for dy in 0..hk {
                    for dx in 0..wk {
                        let v = input.at(tz * dk + dz, ty * hk + dy, tx * wk + dx, c) as f64 / 255.0;
                        acc += wts[[o, c, dz, dy, dx]] * v;
                    }
                }
            }
        }
        acc
    }))
}
