use std::io::Read;
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use serde::Deserialize;

use super::DetectionResult;
use crate::error::{Error, Result};
use crate::segment::Segment;

#[derive(Deserialize)]
struct WireSegment {
    start: f64,
    end: f64,
}

/// Parses the stdout contract: a JSON array of `{"start", "end"}` objects.
pub fn parse_external_output(stdout: &str) -> Result<Vec<Segment>> {
    let wire: Vec<WireSegment> = serde_json::from_str(stdout.trim()).map_err(|e| Error::Parse(format!("detector output: {e}")))?;
    wire.into_iter()
        .map(|w| {
            let s = Segment::new(w.start, w.end);
            if s.is_valid() && s.start >= 0.0 {
                Ok(s)
            } else {
                Err(Error::Parse(format!("invalid segment ({}, {})", w.start, w.end)))
            }
        })
        .collect()
}

fn drain<R: Read + Send + 'static>(mut r: R) -> std::thread::JoinHandle<String> {
    std::thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = r.read_to_end(&mut buf);
        String::from_utf8_lossy(&buf).into_owned()
    })
}

/// Runs `command` with `clip_path` appended as the final argument and reads
/// window-local segments from its stdout.
pub fn run_external_detector(command: &[String], clip_path: &Path, timeout_s: f64) -> Result<DetectionResult> {
    let (exe, args) = command.split_first().ok_or_else(|| Error::pre("empty detector command"))?;
    if !(timeout_s > 0.0) {
        return Err(Error::pre("timeout must be positive"));
    }
    if !clip_path.exists() {
        return Err(Error::io(
            clip_path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "window clip missing"),
        ));
    }
    let t0 = Instant::now();
    let mut child = Command::new(exe)
        .args(args)
        .arg(clip_path)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| Error::io(exe, e))?;
    let out = drain(child.stdout.take().expect("piped"));
    let err = drain(child.stderr.take().expect("piped"));
    let deadline = t0 + Duration::from_secs_f64(timeout_s);
    let status = loop {
        match child.try_wait().map_err(|e| Error::io(exe, e))? {
            Some(status) => break status,
            None if Instant::now() >= deadline => {
                let _ = child.kill();
                let _ = child.wait();
                return Err(Error::Timeout(timeout_s));
            }
            None => std::thread::sleep(Duration::from_millis(2)),
        }
    };
    let wall_time_s = t0.elapsed().as_secs_f64();
    let stdout = out.join().unwrap_or_default();
    let stderr = err.join().unwrap_or_default();
    if !status.success() {
        return Err(Error::Detector {
            status: status.to_string(),
            diagnostics: stderr.trim().to_string(),
        });
    }
    Ok(DetectionResult {
        segments: parse_external_output(&stdout)?,
        wall_time_s,
        io_time_s: 0.0,
    })
}
