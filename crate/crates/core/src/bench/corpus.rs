use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{DatasetManifest, ManifestEntry, QualityTier};
use crate::error::{Error, Result};
use crate::seed::derive_seed;
use crate::synth::{procedural_shot, sample_plan, synthesize, DurationMode, EffectId, LabelFile, PlanOptions, SynthPlan};
use crate::video::{save_rawvid, Fps, VideoClip};

/// Shape of a procedurally generated benchmark corpus.
#[derive(Clone, Debug)]
pub struct CorpusOptions {
    pub videos: usize,
    pub seed: u64,
    pub width: u32,
    pub height: u32,
    pub fps: Fps,
    /// Inclusive range of shots per video.
    pub shots: (usize, usize),
    /// Range of shot lengths in seconds.
    pub shot_seconds: (f64, f64),
    pub cap: f64,
    pub durations: DurationMode,
    /// Walk a seeded shuffle of the whole catalog so every effect appears
    /// once before any repeats.
    pub cover_all_effects: bool,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        CorpusOptions {
            videos: 100,
            seed: 0,
            width: 64,
            height: 48,
            fps: Fps::integer(25),
            shots: (3, 4),
            shot_seconds: (4.0, 7.0),
            cap: crate::synth::DEFAULT_CAP_S,
            durations: DurationMode::Uniform,
            cover_all_effects: true,
        }
    }
}

/// One synthesized video with its source shots and plan.
#[derive(Clone, Debug)]
pub struct CorpusVideo {
    pub name: String,
    pub shots: Vec<VideoClip>,
    pub plan: SynthPlan,
    pub clip: VideoClip,
    pub labels: LabelFile,
}

struct Layout {
    /// Shot lengths in frames, per video.
    shot_frames: Vec<Vec<usize>>,
    /// Effects per video when covering the catalog.
    effects: Vec<Option<Vec<EffectId>>>,
}

fn layout(opts: &CorpusOptions) -> Result<Layout> {
    let (lo, hi) = opts.shots;
    if lo < 2 || hi < lo {
        return Err(Error::pre(format!("shots per video {lo}..={hi} must start at 2 or more")));
    }
    let (smin, smax) = opts.shot_seconds;
    if !(smin > 0.0 && smax >= smin) {
        return Err(Error::pre("shot length range must be positive and ordered"));
    }
    let fps = opts.fps;
    let shot_frames: Vec<Vec<usize>> = (0..opts.videos)
        .map(|v| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(opts.seed, v as u64));
            let n = rng.random_range(lo..=hi);
            (0..n)
                .map(|_| (fps.frames_floor(rng.random_range(smin..=smax)) as usize).max(2))
                .collect()
        })
        .collect();
    let effects = if opts.cover_all_effects {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(opts.seed, u64::MAX));
        let mut deck: Vec<EffectId> = Vec::new();
        let mut out = Vec::with_capacity(opts.videos);
        for shots in &shot_frames {
            let need = shots.len() - 1;
            let mut mine = Vec::with_capacity(need);
            while mine.len() < need {
                if deck.is_empty() {
                    deck = EffectId::all().collect();
                    deck.shuffle(&mut rng);
                }
                mine.push(deck.pop().expect("refilled"));
            }
            out.push(Some(mine));
        }
        out
    } else {
        vec![None; opts.videos]
    };
    Ok(Layout { shot_frames, effects })
}

fn make_video(opts: &CorpusOptions, layout: &Layout, v: usize) -> Result<CorpusVideo> {
    let vseed = derive_seed(opts.seed, v as u64);
    let shots: Vec<VideoClip> = layout.shot_frames[v]
        .iter()
        .enumerate()
        .map(|(k, &n)| procedural_shot(derive_seed(vseed, 1000 + k as u64), opts.width, opts.height, opts.fps, n))
        .collect();
    let plan_opts = PlanOptions {
        cap: opts.cap,
        durations: opts.durations,
        effect_cycle: layout.effects[v].clone(),
    };
    let plan = sample_plan(&shots, vseed, &plan_opts)?;
    let out = synthesize(&shots, &plan)?;
    let name = format!("video_{v:03}");
    let labels = LabelFile {
        video: format!("{name}.stdv"),
        fps: opts.fps,
        duration_s: out.clip.duration(),
        transitions: out.labels,
    };
    labels.validate()?;
    Ok(CorpusVideo {
        name,
        shots,
        plan,
        clip: out.clip,
        labels,
    })
}

/// Generates video `index` of the corpus described by `opts`; identical to
/// the corresponding element of [`synth_corpus`].
pub fn corpus_video(opts: &CorpusOptions, index: usize) -> Result<CorpusVideo> {
    if index >= opts.videos {
        return Err(Error::pre(format!("video {index} outside corpus of {}", opts.videos)));
    }
    make_video(opts, &layout(opts)?, index)
}

/// Generates the whole corpus in memory.
pub fn synth_corpus(opts: &CorpusOptions) -> Result<Vec<CorpusVideo>> {
    let layout = layout(opts)?;
    (0..opts.videos).into_par_iter().map(|v| make_video(opts, &layout, v)).collect()
}

/// Writes the corpus to `dir` as `.stdv` videos plus label files and returns
/// the manifest (also saved as `dir/manifest.json`, with relative paths).
pub fn build_corpus(dir: impl AsRef<Path>, opts: &CorpusOptions, name: &str, quality: QualityTier) -> Result<DatasetManifest> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let layout = layout(opts)?;
    let entries = (0..opts.videos)
        .into_par_iter()
        .map(|v| {
            let cv = make_video(opts, &layout, v)?;
            let video = format!("{}.stdv", cv.name);
            let labels = format!("{}.json", cv.name);
            save_rawvid(&cv.clip, dir.join(&video))?;
            cv.labels.save(dir.join(&labels))?;
            Ok(ManifestEntry {
                video: video.into(),
                labels: labels.into(),
                fps: opts.fps,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let manifest = DatasetManifest {
        name: name.to_string(),
        domain: "synthetic".into(),
        quality,
        entries,
    };
    manifest.save(dir.join("manifest.json"))?;
    Ok(manifest)
}
