use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use stdkit_core::bench::{
    build_corpus, run_benchmark, BenchDetector, BenchReport, CorpusOptions, DatasetManifest, QualityTier,
};
use stdkit_core::detect::{oracle_segments, AdaptiveParams, DetectionResult, DetectorSpec, OracleParams};
use stdkit_core::flow::{flow_sequence, flow_to_color, fuse_channels};
use stdkit_core::metrics::{evaluate, parse_tau_grid, MetricsReport};
use stdkit_core::seed::derive_seed;
use stdkit_core::synth::{procedural_shot, sample_plan, synthesize, DurationMode, LabelFile, PlanOptions};
use stdkit_core::video::{import_ppm_sequence, load_rawvid, save_fused, save_rawvid};
use stdkit_core::windowing::run_pipeline;
use stdkit_core::{Fps, Segment, VideoClip};
use tracing::info;

use crate::args::{
    BenchArgs, DetectArgs, DetectorArgs, DetectorKind, EvalArgs, FlowArgs, Format, ReportArgs, SynthArgs, WindowArgs,
};
use crate::config::Config;
use crate::exit::{CliError, PARTIAL};

type CliResult<T = ()> = Result<T, CliError>;

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::json(path, e))
}

/// Writes to `path`, or to stdout when absent.
fn emit(path: Option<&Path>, text: &str) -> CliResult {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|()| out.flush())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

fn parse_fps(s: &str) -> CliResult<Fps> {
    s.parse().map_err(|e: stdkit_core::Error| CliError::usage(format!("--fps: {e}")))
}

fn parse_size(s: &str) -> CliResult<(u32, u32)> {
    let bad = || CliError::usage(format!("--size `{s}` is not WIDTHxHEIGHT"));
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let w: u32 = w.trim().parse().map_err(|_| bad())?;
    let h: u32 = h.trim().parse().map_err(|_| bad())?;
    if w == 0 || h == 0 {
        return Err(bad());
    }
    Ok((w, h))
}

pub(crate) fn parse_durations(s: &str) -> CliResult<DurationMode> {
    if s == "uniform" {
        return Ok(DurationMode::Uniform);
    }
    let frac = s
        .strip_prefix("stratified:")
        .and_then(|f| f.parse::<f64>().ok())
        .filter(|f| (0.0..=1.0).contains(f))
        .ok_or_else(|| CliError::usage(format!("--durations `{s}`: expected `uniform` or `stratified:<0..1>`")))?;
    Ok(DurationMode::Stratified { long_fraction: frac })
}

fn parse_quality(s: &str) -> CliResult<QualityTier> {
    serde_json::from_value(serde_json::Value::String(s.into()))
        .map_err(|_| CliError::usage(format!("--quality `{s}`: expected very_high, high or medium")))
}

fn tau_grid(flag: Option<&str>, cfg: &Config) -> CliResult<Vec<f64>> {
    match flag {
        Some(s) => parse_tau_grid(s).map_err(|e| CliError::usage(format!("--tau: {e}"))),
        None => Ok(cfg.tau.clone()),
    }
}

/// Overlays window flags on the config.
pub fn apply_window(cfg: &mut Config, w: &WindowArgs) {
    if let Some(v) = w.window {
        cfg.window_s = v;
    }
    if let Some(v) = w.stride {
        cfg.stride_s = v;
    }
    if let Some(v) = w.nms_iou {
        cfg.nms_iou = v;
    }
    if let Some(v) = w.min_gap {
        cfg.min_gap_s = Some(v);
    }
}

fn check_unit(name: &str, v: f64) -> CliResult<f64> {
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(CliError::usage(format!("{name} {v} outside [0, 1]")))
    }
}

/// Builds the detector for everything except the oracle, which needs labels.
fn heuristic_spec(d: &DetectorArgs, cfg: &Config) -> CliResult<DetectorSpec> {
    let dd = &cfg.detectors;
    let t = |default: f64| d.threshold.map_or(Ok(default), |v| check_unit("--threshold", v));
    Ok(match d.detector {
        DetectorKind::Content => DetectorSpec::Content {
            threshold: t(dd.content_threshold)?,
        },
        DetectorKind::Hist => DetectorSpec::Hist {
            bins: dd.hist_bins,
            threshold: t(dd.hist_threshold)?,
        },
        DetectorKind::Adaptive => DetectorSpec::Adaptive(AdaptiveParams {
            threshold: d.threshold.unwrap_or(dd.adaptive.threshold),
            ..dd.adaptive.clone()
        }),
        DetectorKind::Threshold => DetectorSpec::Threshold {
            level: t(dd.dark_level)?,
        },
        DetectorKind::External => {
            let exe = d
                .cmd
                .clone()
                .ok_or_else(|| CliError::usage("--detector external needs --cmd"))?;
            let timeout_s = d.timeout.unwrap_or(dd.external_timeout_s);
            if !(timeout_s.is_finite() && timeout_s > 0.0) {
                return Err(CliError::usage("--timeout must be positive"));
            }
            DetectorSpec::External {
                command: std::iter::once(exe).chain(d.cmd_args.iter().cloned()).collect(),
                timeout_s,
            }
        }
        DetectorKind::Oracle => unreachable!("oracle is built from labels"),
    })
}

fn oracle_params(d: &DetectorArgs) -> CliResult<OracleParams> {
    let seed = d
        .seed
        .ok_or_else(|| CliError::usage("--detector oracle needs --seed"))?;
    if !(d.jitter.is_finite() && d.jitter >= 0.0) {
        return Err(CliError::usage("--jitter must be non-negative"));
    }
    Ok(OracleParams {
        jitter_s: d.jitter,
        drop_prob: check_unit("--drop", d.drop)?,
        seed,
    })
}

// synth ---------------------------------------------------------------------

fn load_shots(dir: &Path, fps: Fps) -> CliResult<Vec<VideoClip>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir() || p.extension().is_some_and(|x| x.eq_ignore_ascii_case("stdv")))
        .collect();
    paths.sort();
    paths
        .par_iter()
        .map(|p| {
            if p.is_dir() {
                import_ppm_sequence(p, fps).map_err(CliError::from)
            } else {
                load_rawvid(p).map_err(CliError::from)
            }
        })
        .collect()
}

pub fn synth(a: &SynthArgs, cfg: &Config) -> CliResult {
    let cap = a.cap.unwrap_or(cfg.synth_cap_s);
    if !(cap.is_finite() && cap > 0.0) {
        return Err(CliError::usage(format!("--cap {cap} must be positive")));
    }
    let durations = parse_durations(&a.durations)?;
    let fps = parse_fps(&a.fps)?;
    let (width, height) = parse_size(&a.size)?;
    if !(a.shot_seconds.is_finite() && a.shot_seconds > 0.0) {
        return Err(CliError::usage("--shot-seconds must be positive"));
    }

    if let Some(videos) = a.corpus {
        let opts = CorpusOptions {
            videos,
            seed: a.seed,
            width,
            height,
            fps,
            cap,
            durations,
            ..CorpusOptions::default()
        };
        let m = build_corpus(&a.out, &opts, &a.name, parse_quality(&a.quality)?)?;
        info!(videos = m.entries.len(), dir = %a.out.display(), "corpus written");
        return Ok(());
    }

    let shots = match (&a.shots, a.procedural) {
        (Some(dir), None) => load_shots(dir, fps)?,
        (None, Some(n)) => {
            let frames = fps.frames_floor(a.shot_seconds) as usize;
            (0..n)
                .into_par_iter()
                .map(|i| procedural_shot(derive_seed(a.seed, i as u64), width, height, fps, frames))
                .collect()
        }
        _ => return Err(CliError::usage("synth needs one of --shots, --procedural or --corpus")),
    };
    let plan = sample_plan(
        &shots,
        a.seed,
        &PlanOptions {
            cap,
            durations,
            effect_cycle: None,
        },
    )?;
    let out = synthesize(&shots, &plan)?;
    save_rawvid(&out.clip, &a.out)?;
    let labels = LabelFile {
        video: a.out.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
        fps: out.clip.fps(),
        duration_s: out.clip.duration(),
        transitions: out.labels,
    };
    let label_path = a.labels.clone().unwrap_or_else(|| a.out.with_extension("json"));
    labels.save(&label_path)?;
    info!(frames = out.clip.len(), transitions = labels.transitions.len(), "clip synthesized");
    Ok(())
}

// flow ----------------------------------------------------------------------

pub fn flow(a: &FlowArgs, cfg: &Config) -> CliResult {
    let block = a.block.unwrap_or(cfg.flow.block);
    let radius = a.radius.unwrap_or(cfg.flow.radius);
    let stride = a.stride.unwrap_or(cfg.flow.stride);
    if block == 0 || stride == 0 {
        return Err(CliError::usage("--block and --stride must be positive"));
    }
    let clip = load_rawvid(&a.input)?;
    let fields = flow_sequence(clip.frames(), stride, block, radius)?;
    let viz: Vec<_> = fields.par_iter().map(flow_to_color).collect();
    if a.fuse {
        let fused = clip
            .frames()
            .par_iter()
            .zip(&viz)
            .map(|(c, v)| fuse_channels(c, v))
            .collect::<Result<Vec<_>, _>>()?;
        save_fused(&fused, clip.fps(), &a.out)?;
    } else {
        save_rawvid(&VideoClip::new(viz, clip.fps())?, &a.out)?;
    }
    info!(frames = clip.len(), fused = a.fuse, "flow written");
    Ok(())
}

// detect --------------------------------------------------------------------

pub fn detect(a: &DetectArgs, cfg: &Config) -> CliResult {
    let spec = match a.detector.detector {
        DetectorKind::Oracle => {
            let p = oracle_params(&a.detector)?;
            let path = a
                .labels
                .as_ref()
                .ok_or_else(|| CliError::usage("--detector oracle needs --labels"))?;
            let clip = load_rawvid(&a.clip)?;
            let labels = LabelFile::load(path)?;
            labels.validate()?;
            let spec = DetectorSpec::Oracle {
                segments: oracle_segments(&labels.transitions, &p, clip.duration())?,
            };
            return finish_detect(a, &clip, &spec, cfg);
        }
        _ => heuristic_spec(&a.detector, cfg)?,
    };
    let clip = load_rawvid(&a.clip)?;
    finish_detect(a, &clip, &spec, cfg)
}

fn finish_detect(a: &DetectArgs, clip: &VideoClip, spec: &DetectorSpec, cfg: &Config) -> CliResult {
    let result = run_pipeline(clip, spec, &cfg.pipeline())?;
    info!(detector = spec.name(), segments = result.segments.len(), wall_time_s = result.wall_time_s, "detection done");
    let mut text = serde_json::to_string_pretty(&result).expect("result serializes");
    text.push('\n');
    emit(a.out.as_deref(), &text)
}

// eval ----------------------------------------------------------------------

/// Predictions as a full detection result or a bare segment array.
#[derive(Deserialize)]
#[serde(untagged)]
enum PredFile {
    Result(DetectionResult),
    Segments(Vec<Segment>),
}

pub fn load_preds(path: &Path) -> CliResult<DetectionResult> {
    Ok(match read_json::<PredFile>(path)? {
        PredFile::Result(r) => r,
        PredFile::Segments(segments) => DetectionResult {
            segments,
            ..DetectionResult::default()
        },
    })
}

pub fn eval(a: &EvalArgs, cfg: &Config) -> CliResult {
    let taus = tau_grid(a.tau.as_deref(), cfg)?;
    let labels = LabelFile::load(&a.labels)?;
    labels.validate()?;
    if let Some(f) = &a.fps {
        let fps = parse_fps(f)?;
        if fps != labels.fps {
            return Err(stdkit_core::Error::Inconsistent(format!("--fps {fps} disagrees with labels at {}", labels.fps)).into());
        }
    }
    let preds = load_preds(&a.preds)?;
    let report = evaluate(&preds, &labels.transitions, labels.fps, labels.duration_s, &taus)?;
    let name = a.name.clone().unwrap_or_else(|| labels.video.clone());
    let text = match a.format {
        Format::Csv => report.to_csv(&name),
        Format::Table => format!("{}\n{}", report.to_table(&name), report.category_table()),
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
    };
    emit(a.out.as_deref(), &text)
}

// bench ---------------------------------------------------------------------

pub fn bench(a: &BenchArgs, cfg: &Config) -> CliResult {
    let taus = tau_grid(a.tau.as_deref(), cfg)?;
    let detector = match a.detector.detector {
        DetectorKind::Oracle => BenchDetector::Oracle(oracle_params(&a.detector)?),
        _ => BenchDetector::Spec(heuristic_spec(&a.detector, cfg)?),
    };
    let manifests = a
        .manifest
        .iter()
        .map(DatasetManifest::load)
        .collect::<Result<Vec<_>, _>>()?;
    let report = run_benchmark(&manifests, &detector, &cfg.pipeline(), &taus)?;
    emit(a.out.as_deref(), &report.to_csv())?;
    if let Some(p) = &a.json {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        fs::write(p, text).map_err(|e| CliError::io(p, e))?;
    }
    for f in &report.failures {
        eprintln!("warning: video={}/{} kind={} msg={}", f.dataset, f.video, f.kind, serde_json::to_string(&f.message).unwrap_or_default());
    }
    if report.failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::new(
            PARTIAL,
            "partial",
            format!("{} of {} videos failed", report.failures.len(), report.failures.len() + report.videos.len()),
        ))
    }
}

// report --------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(untagged)]
enum AnyReport {
    Bench(Box<BenchReport>),
    Metrics(Box<MetricsReport>),
}

pub fn report(a: &ReportArgs) -> CliResult {
    let text = match read_json::<AnyReport>(&a.input)? {
        AnyReport::Bench(b) => b.to_table(&a.method),
        AnyReport::Metrics(m) => format!("{}\n{}", m.to_table(&a.method), m.category_table()),
    };
    emit(a.out.as_deref(), &text)
}
