use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{DatasetManifest, QualityTier};
use crate::error::{Error, Result};

/// Sampling mass per quality tier.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TierProbs {
    pub very_high: f64,
    pub high: f64,
    pub medium: f64,
}

impl Default for TierProbs {
    fn default() -> Self {
        TierProbs {
            very_high: 0.7,
            high: 0.2,
            medium: 0.1,
        }
    }
}

impl TierProbs {
    pub fn get(&self, t: QualityTier) -> f64 {
        match t {
            QualityTier::VeryHigh => self.very_high,
            QualityTier::High => self.high,
            QualityTier::Medium => self.medium,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.very_high, self.high, self.medium];
        if all.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::pre("tier probabilities must be finite and non-negative"));
        }
        let sum: f64 = all.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::pre(format!("tier probabilities sum to {sum}, not 1")));
        }
        Ok(())
    }
}

/// Position of one drawn entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SampledEntry {
    pub manifest: usize,
    pub entry: usize,
    pub tier: QualityTier,
}

/// Endless seeded stream of manifest entries.
#[derive(Clone, Debug)]
pub struct QualitySampler {
    rng: ChaCha8Rng,
    /// `(tier, renormalized cumulative mass, manifest indices)`.
    tiers: Vec<(QualityTier, f64, Vec<usize>)>,
    sizes: Vec<usize>,
}

impl Iterator for QualitySampler {
    type Item = SampledEntry;

    fn next(&mut self) -> Option<SampledEntry> {
        let u: f64 = self.rng.random();
        let (tier, _, members) = self
            .tiers
            .iter()
            .find(|(_, cum, _)| u < *cum)
            .unwrap_or_else(|| self.tiers.last().expect("non-empty"));
        let manifest = members[self.rng.random_range(0..members.len())];
        let entry = self.rng.random_range(0..self.sizes[manifest]);
        Some(SampledEntry {
            manifest,
            entry,
            tier: *tier,
        })
    }
}

/// Picks a tier by `probs` (mass of absent tiers spread proportionally over
/// present ones), then a manifest uniformly within the tier, then an entry
/// uniformly within the manifest.
pub fn quality_weighted_sampler(manifests: &[DatasetManifest], probs: &TierProbs, seed: u64) -> Result<QualitySampler> {
    if manifests.is_empty() {
        return Err(Error::pre("no manifests to sample from"));
    }
    if let Some(m) = manifests.iter().find(|m| m.entries.is_empty()) {
        return Err(Error::pre(format!("manifest `{}` has no entries", m.name)));
    }
    probs.validate()?;
    let present: Vec<(QualityTier, Vec<usize>)> = QualityTier::ALL
        .iter()
        .map(|&t| (t, (0..manifests.len()).filter(|&i| manifests[i].quality == t).collect::<Vec<_>>()))
        .filter(|(_, v)| !v.is_empty())
        .collect();
    let mass: f64 = present.iter().map(|(t, _)| probs.get(*t)).sum();
    if mass <= 0.0 {
        return Err(Error::pre("present tiers carry zero probability"));
    }
    let mut cum = 0.0;
    let tiers = present
        .into_iter()
        .filter(|(t, _)| probs.get(*t) > 0.0)
        .map(|(t, v)| {
            cum += probs.get(t) / mass;
            (t, cum, v)
        })
        .collect();
    Ok(QualitySampler {
        rng: ChaCha8Rng::seed_from_u64(seed),
        tiers,
        sizes: manifests.iter().map(|m| m.entries.len()).collect(),
    })
}
