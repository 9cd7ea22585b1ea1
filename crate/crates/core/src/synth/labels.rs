use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::segment::TransitionLabel;
use crate::video::Fps;

/// On-disk label document:
/// `{"video", "fps": [num, den], "duration_s", "transitions": [{"start", "end", "type"}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelFile {
    pub video: String,
    pub fps: Fps,
    pub duration_s: f64,
    pub transitions: Vec<TransitionLabel>,
}

impl LabelFile {
    /// Checks ordering, bounds and the cut convention.
    pub fn validate(&self) -> Result<()> {
        let mut prev_end = 0.0;
        for (i, t) in self.transitions.iter().enumerate() {
            if !(t.start.is_finite() && t.end.is_finite()) || t.start < 0.0 || t.start > t.end {
                return Err(Error::Invariant(format!("label {i} has invalid span ({}, {})", t.start, t.end)));
            }
            if t.kind == "cut" && t.start != t.end {
                return Err(Error::Invariant(format!("cut label {i} has nonzero length")));
            }
            if t.start < prev_end {
                return Err(Error::Invariant(format!("label {i} overlaps its predecessor")));
            }
            if t.end > self.duration_s + 1e-9 {
                return Err(Error::Invariant(format!("label {i} ends after the video")));
            }
            prev_end = t.end;
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = serde_json::to_string_pretty(self).expect("labels serialize");
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}
