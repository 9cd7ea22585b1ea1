//! Benchmark assembly: dataset manifests, duration buckets, quality-weighted
//! sampling, end-to-end runs and a procedural corpus builder.

mod corpus;
mod manifest;
mod run;
mod sampler;

use serde::{Deserialize, Serialize};

use crate::segment::TransitionLabel;

pub use corpus::{build_corpus, corpus_video, synth_corpus, CorpusOptions, CorpusVideo};
pub use manifest::{DatasetManifest, ManifestEntry, QualityTier};
pub use run::{run_benchmark, BenchDetector, BenchReport, DatasetSummary, VideoFailure, VideoOutcome};
pub use sampler::{quality_weighted_sampler, QualitySampler, SampledEntry, TierProbs};

/// Duration bucket of a transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    /// Shorter than 0.1 s.
    Cut,
    /// 0.1 s up to and including 1 s.
    Normal,
    /// Longer than 1 s.
    Long,
}

impl Category {
    pub const ALL: [Category; 3] = [Category::Cut, Category::Normal, Category::Long];
}

impl std::fmt::Display for Category {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Category::Cut => "Cut",
            Category::Normal => "Normal",
            Category::Long => "Long",
        })
    }
}

pub fn categorize_duration(d: f64) -> Category {
    if d < 0.1 {
        Category::Cut
    } else if d <= 1.0 {
        Category::Normal
    } else {
        Category::Long
    }
}

pub fn categorize(label: &TransitionLabel) -> Category {
    categorize_duration(label.duration())
}
