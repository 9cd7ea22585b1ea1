//! Transition synthesis engine.
//!
//! Shots are spliced with overlapping transitions drawn from a 59-entry
//! effect catalog. Each transition consumes `d` seconds shared by both
//! adjacent shots, so the output lasts `sum(shot durations) - sum(d)` and
//! every label covers exactly the blended frames.

mod catalog;
mod labels;
mod plan;
mod render;
mod shots;
mod splice;

pub use catalog::{Corner, Easing, EffectId, Family, Motion, Origin, CATALOG_SIZE};
pub use labels::LabelFile;
pub use plan::{compute_tmax, sample_plan, DurationMode, EffectSpec, PlanOptions, SynthPlan};
pub use render::{render_transition, render_transition_named};
pub use shots::procedural_shot;
pub use splice::{synthesize, SynthOutput};

/// Default upper bound on a transition's duration, in seconds.
pub const DEFAULT_CAP_S: f64 = 3.0;
