use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An 8-bit RGB frame stored row-major as `[r, g, b, r, g, b, ...]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Frame")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish_non_exhaustive()
    }
}

impl Frame {
    pub fn new(width: u32, height: u32, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::pre(format!("frame dimensions must be positive, got {width}x{height}")));
        }
        let expected = width as usize * height as usize * 3;
        if data.len() != expected {
            return Err(Error::pre(format!(
                "pixel buffer holds {} bytes, {width}x{height} RGB needs {expected}",
                data.len()
            )));
        }
        Ok(Frame { width, height, data })
    }

    /// A frame filled with one color.
    pub fn solid(width: u32, height: u32, rgb: [u8; 3]) -> Self {
        assert!(width > 0 && height > 0, "frame dimensions must be positive");
        let data = rgb.repeat(width as usize * height as usize);
        Frame { width, height, data }
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> [u8; 3]) -> Self {
        assert!(width > 0 && height > 0, "frame dimensions must be positive");
        let mut data = Vec::with_capacity(width as usize * height as usize * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Frame { width, height, data }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dims(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn pixel_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    pub fn pixel(&self, x: u32, y: u32) -> [u8; 3] {
        let i = (y as usize * self.width as usize + x as usize) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    #[inline]
    pub fn set_pixel(&mut self, x: u32, y: u32, rgb: [u8; 3]) {
        let i = (y as usize * self.width as usize + x as usize) * 3;
        self.data[i..i + 3].copy_from_slice(&rgb);
    }
}

/// Single-channel 8-bit plane, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LumaPlane {
    pub width: u32,
    pub height: u32,
    pub data: Vec<u8>,
}

impl LumaPlane {
    #[inline]
    pub fn at(&self, x: u32, y: u32) -> u8 {
        self.data[y as usize * self.width as usize + x as usize]
    }
}

/// BT.601 luma, `round(0.299 R + 0.587 G + 0.114 B)`, in integer arithmetic.
pub fn to_grayscale(frame: &Frame) -> LumaPlane {
    let data = frame
        .data
        .chunks_exact(3)
        .map(|p| luma(p[0], p[1], p[2]))
        .collect();
    LumaPlane {
        width: frame.width,
        height: frame.height,
        data,
    }
}

#[inline]
pub(crate) fn luma(r: u8, g: u8, b: u8) -> u8 {
    // weights sum to 1000, so the quotient never exceeds 255
    ((299 * r as u32 + 587 * g as u32 + 114 * b as u32 + 500) / 1000) as u8
}

/// Frames per second as an exact rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[u32; 2]", into = "[u32; 2]")]
pub struct Fps {
    num: u32,
    den: u32,
}

impl Fps {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::pre(format!("fps {num}/{den} must have positive terms")));
        }
        Ok(Fps { num, den })
    }

    pub const fn integer(num: u32) -> Self {
        assert!(num > 0);
        Fps { num, den: 1 }
    }

    pub fn num(&self) -> u32 {
        self.num
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Timestamp of frame `index`, `index * den / num` seconds.
    pub fn frame_time(&self, index: u64) -> f64 {
        (index as f64 * self.den as f64) / self.num as f64
    }

    /// Nearest frame index for a timestamp; halves round away from zero.
    pub fn frame_index(&self, seconds: f64) -> i64 {
        (seconds * self.num as f64 / self.den as f64).round() as i64
    }

    /// Whole frames fitting in `seconds`, never exceeding it.
    pub fn frames_floor(&self, seconds: f64) -> u64 {
        // small slack absorbs representation error of exact multiples
        let f = seconds * self.num as f64 / self.den as f64;
        (f + 1e-9).floor().max(0.0) as u64
    }

    pub fn frames_ceil(&self, seconds: f64) -> u64 {
        let f = seconds * self.num as f64 / self.den as f64;
        (f - 1e-9).ceil().max(0.0) as u64
    }
}

impl TryFrom<[u32; 2]> for Fps {
    type Error = Error;

    fn try_from(v: [u32; 2]) -> Result<Self> {
        Fps::new(v[0], v[1])
    }
}

impl From<Fps> for [u32; 2] {
    fn from(f: Fps) -> Self {
        [f.num, f.den]
    }
}

impl fmt::Display for Fps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl std::str::FromStr for Fps {
    type Err = Error;

    /// Accepts `25`, `25/1` or `30000/1001`.
    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("invalid fps `{s}`")))
        };
        match s.split_once('/') {
            Some((n, d)) => Fps::new(parse(n)?, parse(d)?),
            None => Fps::new(parse(s)?, 1),
        }
    }
}

/// A fixed-rate sequence of equally sized frames.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VideoClip {
    frames: Vec<Frame>,
    fps: Fps,
}

impl VideoClip {
    pub fn new(frames: Vec<Frame>, fps: Fps) -> Result<Self> {
        if let Some(first) = frames.first() {
            let dims = first.dims();
            if let Some((i, f)) = frames.iter().enumerate().find(|(_, f)| f.dims() != dims) {
                return Err(Error::Inconsistent(format!(
                    "frame {i} is {}x{}, expected {}x{}",
                    f.width, f.height, dims.0, dims.1
                )));
            }
        }
        Ok(VideoClip { frames, fps })
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn into_frames(self) -> Vec<Frame> {
        self.frames
    }

    pub fn fps(&self) -> Fps {
        self.fps
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// `(width, height)` of the frames, `None` for an empty clip.
    pub fn dims(&self) -> Option<(u32, u32)> {
        self.frames.first().map(Frame::dims)
    }

    pub fn frame_time(&self, index: usize) -> f64 {
        self.fps.frame_time(index as u64)
    }

    /// Duration in seconds: frame count divided by fps.
    pub fn duration(&self) -> f64 {
        self.fps.frame_time(self.frames.len() as u64)
    }

    pub fn view(&self) -> ClipView<'_> {
        ClipView {
            frames: &self.frames,
            fps: self.fps,
        }
    }

    pub fn slice(&self, range: Range<usize>) -> ClipView<'_> {
        ClipView {
            frames: &self.frames[range],
            fps: self.fps,
        }
    }
}

/// Borrowed run of frames sharing the parent clip's rate.
#[derive(Clone, Copy, Debug)]
pub struct ClipView<'a> {
    pub frames: &'a [Frame],
    pub fps: Fps,
}

impl ClipView<'_> {
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn to_clip(&self) -> VideoClip {
        VideoClip {
            frames: self.frames.to_vec(),
            fps: self.fps,
        }
    }
}
