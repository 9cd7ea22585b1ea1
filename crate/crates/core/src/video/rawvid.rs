//! `.stdv` raw container.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic        8 bytes   "STDVID01" (RGB24) or "STDVF601" (6 channels)
//! width        u32
//! height       u32
//! fps_num      u32
//! fps_den      u32
//! frame_count  u64
//! payload      frame_count * width * height * channels bytes, row-major
//! ```

use std::fs;
use std::path::Path;

use super::frame::{Fps, Frame, VideoClip};
use crate::error::{Error, Result};
use crate::flow::FusedFrame;

pub const RAW_MAGIC: &[u8; 8] = b"STDVID01";
pub const FUSED_MAGIC: &[u8; 8] = b"STDVF601";
pub const HEADER_LEN: usize = 32;

struct Header {
    width: u32,
    height: u32,
    fps: Fps,
    frame_count: u64,
}

fn write_header(out: &mut Vec<u8>, magic: &[u8; 8], h: &Header) {
    out.extend_from_slice(magic);
    out.extend_from_slice(&h.width.to_le_bytes());
    out.extend_from_slice(&h.height.to_le_bytes());
    out.extend_from_slice(&h.fps.num().to_le_bytes());
    out.extend_from_slice(&h.fps.den().to_le_bytes());
    out.extend_from_slice(&h.frame_count.to_le_bytes());
}

fn read_header(bytes: &[u8], magic: &[u8; 8]) -> Result<Header> {
    if bytes.len() < 8 || &bytes[..8] != magic {
        return Err(Error::Format(format!(
            "bad magic, expected {:?}",
            String::from_utf8_lossy(magic)
        )));
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::Truncated {
            expected: HEADER_LEN as u64,
            actual: bytes.len() as u64,
        });
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let width = u32_at(8);
    let height = u32_at(12);
    let fps = Fps::new(u32_at(16), u32_at(20))
        .map_err(|_| Error::Format(format!("invalid fps {}/{}", u32_at(16), u32_at(20))))?;
    let frame_count = u64::from_le_bytes(bytes[24..32].try_into().unwrap());
    if width == 0 || height == 0 {
        return Err(Error::Format(format!("invalid dimensions {width}x{height}")));
    }
    Ok(Header {
        width,
        height,
        fps,
        frame_count,
    })
}

fn payload_len(h: &Header, channels: u64) -> Result<u64> {
    (h.width as u64)
        .checked_mul(h.height as u64)
        .and_then(|p| p.checked_mul(channels))
        .and_then(|f| f.checked_mul(h.frame_count))
        .ok_or_else(|| Error::Format("declared payload size overflows".into()))
}

fn check_payload(bytes: &[u8], expected: u64) -> Result<()> {
    let actual = (bytes.len() - HEADER_LEN) as u64;
    if actual < expected {
        return Err(Error::Truncated { expected, actual });
    }
    if actual > expected {
        return Err(Error::Format(format!(
            "{} trailing bytes after declared payload",
            actual - expected
        )));
    }
    Ok(())
}

pub fn encode_rawvid(clip: &VideoClip) -> Result<Vec<u8>> {
    let (width, height) = clip
        .dims()
        .ok_or_else(|| Error::pre("cannot save an empty clip"))?;
    let frame_bytes = width as usize * height as usize * 3;
    let mut out = Vec::with_capacity(HEADER_LEN + frame_bytes * clip.len());
    write_header(
        &mut out,
        RAW_MAGIC,
        &Header {
            width,
            height,
            fps: clip.fps(),
            frame_count: clip.len() as u64,
        },
    );
    for f in clip.frames() {
        out.extend_from_slice(f.data());
    }
    Ok(out)
}

pub fn decode_rawvid(bytes: &[u8]) -> Result<VideoClip> {
    let h = read_header(bytes, RAW_MAGIC)?;
    check_payload(bytes, payload_len(&h, 3)?)?;
    let frame_bytes = h.width as usize * h.height as usize * 3;
    let frames = bytes[HEADER_LEN..]
        .chunks_exact(frame_bytes)
        .map(|c| Frame::new(h.width, h.height, c.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    VideoClip::new(frames, h.fps)
}

pub fn save_rawvid(clip: &VideoClip, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_rawvid(clip)?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn load_rawvid(path: impl AsRef<Path>) -> Result<VideoClip> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_rawvid(&bytes)
}

pub fn encode_fused(frames: &[FusedFrame], fps: Fps) -> Result<Vec<u8>> {
    let first = frames
        .first()
        .ok_or_else(|| Error::pre("cannot save an empty fused clip"))?;
    let (width, height) = (first.width(), first.height());
    if frames.iter().any(|f| (f.width(), f.height()) != (width, height)) {
        return Err(Error::Inconsistent("fused frames differ in size".into()));
    }
    let mut out = Vec::with_capacity(HEADER_LEN + frames.len() * first.data().len());
    write_header(
        &mut out,
        FUSED_MAGIC,
        &Header {
            width,
            height,
            fps,
            frame_count: frames.len() as u64,
        },
    );
    for f in frames {
        out.extend_from_slice(f.data());
    }
    Ok(out)
}

pub fn decode_fused(bytes: &[u8]) -> Result<(Vec<FusedFrame>, Fps)> {
    let h = read_header(bytes, FUSED_MAGIC)?;
    check_payload(bytes, payload_len(&h, 6)?)?;
    let frame_bytes = h.width as usize * h.height as usize * 6;
    let frames = bytes[HEADER_LEN..]
        .chunks_exact(frame_bytes)
        .map(|c| FusedFrame::from_raw(h.width, h.height, c.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Ok((frames, h.fps))
}

pub fn save_fused(frames: &[FusedFrame], fps: Fps, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_fused(frames, fps)?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn load_fused(path: impl AsRef<Path>) -> Result<(Vec<FusedFrame>, Fps)> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_fused(&bytes)
}
