//! Shot transition detection toolkit.
//!
//! Transitions are treated as temporal segments `(start, end)` rather than
//! isolated boundary points. The crate covers the whole loop:
//!
//! - [`video`]: frames, rational-fps clips, the `.stdv` raw container and
//!   PPM sequence import.
//! - [`synth`]: a deterministic data engine that splices shots with one of
//!   59 transition effects and emits exact segment labels.
//! - [`flow`]: block-matching optical flow, flow colorization, 6-channel
//!   fusion and zero-padded patch-embedding kernels.
//! - [`detect`]: heuristic baselines, point-to-segment conversion, an
//!   oracle detector and an adapter for external detector processes.
//! - [`windowing`]: sliding-window inference with temporal NMS.
//! - [`metrics`]: tolerance-swept segment/frame P/R/F1, ABE and RTF.
//! - [`bench`]: dataset manifests, quality-aware sampling and benchmark runs.

pub mod bench;
pub mod detect;
pub mod error;
pub mod flow;
pub mod metrics;
pub mod seed;
pub mod segment;
pub mod synth;
pub mod video;
pub mod windowing;

pub use error::{Error, Result};
pub use segment::{Segment, TransitionLabel};
pub use video::{Fps, Frame, VideoClip};
