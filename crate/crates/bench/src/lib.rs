//! Shared fixtures for the throughput benchmarks.

use stdkit_core::bench::{corpus_video, CorpusOptions, CorpusVideo};
use stdkit_core::synth::procedural_shot;
use stdkit_core::{Fps, Segment, VideoClip};

pub const FPS: Fps = Fps::integer(25);

/// A procedural shot of `seconds` at 25 fps.
pub fn shot(seed: u64, width: u32, height: u32, seconds: f64) -> VideoClip {
    procedural_shot(seed, width, height, FPS, FPS.frames_floor(seconds) as usize)
}

/// One spliced video from the default benchmark corpus.
pub fn corpus_clip(index: usize) -> CorpusVideo {
    let opts = CorpusOptions {
        videos: index + 1,
        seed: 1,
        ..CorpusOptions::default()
    };
    corpus_video(&opts, index).expect("corpus video")
}

/// `n` segments laid out every two seconds, each `len` long, shifted by
/// `offset`.
pub fn segment_grid(n: usize, len: f64, offset: f64) -> Vec<Segment> {
    (0..n)
        .map(|i| {
            let s = 2.0 * i as f64 + offset;
            Segment::new(s, s + len)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_have_expected_shape() {
        assert_eq!(shot(0, 8, 6, 1.0).len(), 25);
        let g = segment_grid(3, 0.5, 0.1);
        assert_eq!(g[2], Segment::new(4.1, 4.6));
        assert!(!corpus_clip(0).labels.transitions.is_empty());
    }
}
