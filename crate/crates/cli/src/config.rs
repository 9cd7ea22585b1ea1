use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use stdkit_core::bench::TierProbs;
use stdkit_core::detect::{
    AdaptiveParams, DEFAULT_ADAPTIVE_THRESHOLD, DEFAULT_CONTENT_THRESHOLD, DEFAULT_DARK_LEVEL, DEFAULT_HIST_BINS,
    DEFAULT_HIST_THRESHOLD,
};
use stdkit_core::flow::{DEFAULT_BLOCK, DEFAULT_RADIUS};
use stdkit_core::metrics::default_tau_grid;
use stdkit_core::synth::DEFAULT_CAP_S;
use stdkit_core::windowing::{PipelineOptions, DEFAULT_NMS_IOU, DEFAULT_STRIDE_S, DEFAULT_WINDOW_S};

use crate::exit::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorDefaults {
    pub content_threshold: f64,
    pub hist_bins: usize,
    pub hist_threshold: f64,
    pub adaptive: AdaptiveParams,
    pub dark_level: f64,
    pub external_timeout_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowDefaults {
    pub block: u32,
    pub radius: u32,
    pub stride: usize,
}

/// Every tunable default. Loaded as built-ins, then the `--config` file,
/// then command-line flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub window_s: f64,
    pub stride_s: f64,
    pub nms_iou: f64,
    pub min_gap_s: Option<f64>,
    pub tau: Vec<f64>,
    pub detectors: DetectorDefaults,
    pub synth_cap_s: f64,
    pub sampler: TierProbs,
    pub flow: FlowDefaults,
    pub jobs: Option<usize>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            window_s: DEFAULT_WINDOW_S,
            stride_s: DEFAULT_STRIDE_S,
            nms_iou: DEFAULT_NMS_IOU,
            min_gap_s: None,
            tau: default_tau_grid(),
            detectors: DetectorDefaults {
                content_threshold: DEFAULT_CONTENT_THRESHOLD,
                hist_bins: DEFAULT_HIST_BINS,
                hist_threshold: DEFAULT_HIST_THRESHOLD,
                adaptive: AdaptiveParams {
                    threshold: DEFAULT_ADAPTIVE_THRESHOLD,
                    ..AdaptiveParams::default()
                },
                dark_level: DEFAULT_DARK_LEVEL,
                external_timeout_s: 60.0,
            },
            synth_cap_s: DEFAULT_CAP_S,
            sampler: TierProbs::default(),
            flow: FlowDefaults {
                block: DEFAULT_BLOCK,
                radius: DEFAULT_RADIUS,
                stride: 1,
            },
            jobs: None,
        }
    }
}

/// Recursively overlays `top` onto `base`; objects merge key by key, any
/// other value replaces.
fn merge(base: &mut Value, top: Value) {
    match (base, top) {
        (Value::Object(b), Value::Object(t)) => {
            for (k, v) in t {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

impl Config {
    /// Built-in defaults overlaid with a partial JSON document.
    pub fn overlay(doc: Value) -> Result<Config, CliError> {
        let mut base = serde_json::to_value(Config::default()).expect("config serializes");
        merge(&mut base, doc);
        serde_json::from_value(base).map_err(|e| CliError::usage(format!("config: {e}")))
    }

    pub fn load(path: Option<&Path>) -> Result<Config, CliError> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let doc: Value = serde_json::from_str(&text).map_err(|e| CliError::json(path, e))?;
        if !doc.is_object() {
            return Err(CliError::usage(format!("{}: config must be a JSON object", path.display())));
        }
        Config::overlay(doc).map_err(|e| CliError::usage(format!("{}: {}", path.display(), e.msg)))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::usage(m));
        if !(self.window_s.is_finite() && self.window_s > 0.0) {
            return bad(format!("window {} must be positive", self.window_s));
        }
        if !(self.stride_s.is_finite() && self.stride_s > 0.0) {
            return bad(format!("stride {} must be positive", self.stride_s));
        }
        if self.stride_s > self.window_s {
            return bad(format!("stride {} exceeds window {}", self.stride_s, self.window_s));
        }
        if !(0.0..=1.0).contains(&self.nms_iou) {
            return bad(format!("NMS IoU {} outside [0, 1]", self.nms_iou));
        }
        if self.min_gap_s.is_some_and(|g| !(g.is_finite() && g >= 0.0)) {
            return bad("minimum gap must be non-negative".into());
        }
        if self.tau.is_empty() || self.tau.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return bad("tolerance grid must be non-empty and non-negative".into());
        }
        let d = &self.detectors;
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if !(unit(d.content_threshold) && unit(d.hist_threshold) && unit(d.dark_level)) {
            return bad("detector thresholds must lie in [0, 1]".into());
        }
        if d.hist_bins == 0 || d.hist_bins > 256 {
            return bad(format!("histogram bins {} outside 1..=256", d.hist_bins));
        }
        if !(d.adaptive.threshold > 0.0 && unit(d.adaptive.min_content) && d.adaptive.window > 0) {
            return bad("adaptive detector parameters are invalid".into());
        }
        if !(d.external_timeout_s.is_finite() && d.external_timeout_s > 0.0) {
            return bad("external timeout must be positive".into());
        }
        if !(self.synth_cap_s.is_finite() && self.synth_cap_s > 0.0) {
            return bad(format!("synthesis cap {} must be positive", self.synth_cap_s));
        }
        self.sampler.validate().map_err(|e| CliError::usage(e.to_string()))?;
        if self.flow.block == 0 || self.flow.stride == 0 {
            return bad("flow block and stride must be positive".into());
        }
        if self.jobs == Some(0) {
            return bad("jobs must be positive".into());
        }
        Ok(())
    }

    pub fn pipeline(&self) -> PipelineOptions {
        PipelineOptions {
            window_s: self.window_s,
            stride_s: self.stride_s,
            nms_iou: self.nms_iou,
            min_gap_s: self.min_gap_s,
        }
    }
}
