//! Binary PPM (P6, maxval 255) reading and writing.

use std::fs;
use std::path::Path;

use super::frame::{Fps, Frame, VideoClip};
use crate::error::{Error, Result};

/// Parses one P6 image. ASCII variants and maxval other than 255 are rejected.
pub fn read_ppm(bytes: &[u8]) -> Result<Frame> {
    if bytes.len() < 2 || bytes[0] != b'P' {
        return Err(Error::Unsupported("not a PPM file".into()));
    }
    if bytes[1] != b'6' {
        return Err(Error::Unsupported(format!(
            "PPM variant P{} is not supported, only binary P6",
            bytes[1] as char
        )));
    }
    let mut pos = 2;
    let mut fields = [0u32; 3];
    for field in &mut fields {
        // whitespace and `#` comments may separate header fields
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Format("malformed PPM header".into()));
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Format("PPM header value out of range".into()))?;
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(Error::Unsupported(format!("PPM maxval {maxval}, only 255 is supported")));
    }
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(Error::Format("missing separator after PPM header".into()));
    }
    pos += 1;
    let expected = width as u64 * height as u64 * 3;
    let actual = (bytes.len() - pos) as u64;
    if actual < expected {
        return Err(Error::Truncated { expected, actual });
    }
    Frame::new(width, height, bytes[pos..pos + expected as usize].to_vec())
        .map_err(|e| Error::Format(e.to_string()))
}

pub fn write_ppm(frame: &Frame) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", frame.width(), frame.height()).into_bytes();
    out.extend_from_slice(frame.data());
    out
}

/// Loads every `*.ppm` in `dir`, ordered by file name, as one clip.
pub fn import_ppm_sequence(dir: impl AsRef<Path>, fps: Fps) -> Result<VideoClip> {
    let dir = dir.as_ref();
    let mut paths = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .is_some_and(|ext| ext.eq_ignore_ascii_case("ppm"))
        })
        .collect::<Vec<_>>();
    if paths.is_empty() {
        return Err(Error::pre(format!("no .ppm files in {}", dir.display())));
    }
    paths.sort_by(|a, b| a.file_name().cmp(&b.file_name()));

    let mut frames = Vec::with_capacity(paths.len());
    for path in &paths {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        let frame = read_ppm(&bytes)?;
        if let Some(first) = frames.first().map(Frame::dims) {
            if frame.dims() != first {
                return Err(Error::Inconsistent(format!(
                    "{} is {}x{}, earlier frames are {}x{}",
                    path.display(),
                    frame.width(),
                    frame.height(),
                    first.0,
                    first.1
                )));
            }
        }
        frames.push(frame);
    }
    VideoClip::new(frames, fps)
}
