use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::video::Fps;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QualityTier {
    #[serde(rename = "very_high", alias = "VeryHigh", alias = "very-high", alias = "Very High")]
    VeryHigh,
    #[serde(rename = "high", alias = "High")]
    High,
    #[serde(rename = "medium", alias = "Medium")]
    Medium,
}

impl QualityTier {
    pub const ALL: [QualityTier; 3] = [QualityTier::VeryHigh, QualityTier::High, QualityTier::Medium];
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub video: PathBuf,
    pub labels: PathBuf,
    pub fps: Fps,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub name: String,
    pub domain: String,
    pub quality: QualityTier,
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    /// Reads a manifest, resolving relative entry paths against its
    /// directory and checking that every file exists.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut m: DatasetManifest = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for e in &mut m.entries {
            for p in [&mut e.video, &mut e.labels] {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
                if !p.exists() {
                    return Err(Error::io(
                        p.clone(),
                        std::io::Error::new(std::io::ErrorKind::NotFound, "manifest entry missing"),
                    ));
                }
            }
        }
        Ok(m)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}
