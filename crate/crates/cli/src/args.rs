use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "stdkit", version, about = "Shot transition detection toolkit", arg_required_else_help = true)]
pub struct Cli {
    /// JSON config layered over the built-in defaults; flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Worker threads for parallel stages.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,

    /// Emit JSON-lines logs on stderr.
    #[arg(long, global = true)]
    pub trace: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Splice shots with random transitions and write the clip and its labels.
    Synth(SynthArgs),
    /// Write the flow-visualization clip, or the fused 6-channel clip.
    Flow(FlowArgs),
    /// Run a detector over a clip with sliding windows and NMS.
    Detect(DetectArgs),
    /// Score predictions against labels.
    Eval(EvalArgs),
    /// Run a detector over dataset manifests and aggregate the scores.
    Bench(BenchArgs),
    /// Render a JSON report as markdown tables.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Directory of `.stdv` shots, or of PPM-sequence subdirectories, spliced in name order.
    #[arg(long, value_name = "DIR", conflicts_with_all = ["procedural", "corpus"])]
    pub shots: Option<PathBuf>,

    /// Generate this many procedural shots instead of reading `--shots`.
    #[arg(long, value_name = "N", conflicts_with = "corpus")]
    pub procedural: Option<usize>,

    /// Build a corpus of this many videos in the `--out` directory, with a manifest.
    #[arg(long, value_name = "N")]
    pub corpus: Option<usize>,

    #[arg(long)]
    pub seed: u64,

    /// Longest transition in seconds.
    #[arg(long, value_name = "SEC")]
    pub cap: Option<f64>,

    /// `uniform` or `stratified:<long fraction>`.
    #[arg(long, value_name = "MODE", default_value = "uniform")]
    pub durations: String,

    /// Output clip (or directory with `--corpus`).
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,

    /// Label file; defaults to the clip path with a `.json` extension.
    #[arg(long, value_name = "PATH")]
    pub labels: Option<PathBuf>,

    /// Frame rate for PPM and procedural shots.
    #[arg(long, default_value = "25")]
    pub fps: String,

    /// Procedural frame size, `WIDTHxHEIGHT`.
    #[arg(long, default_value = "64x48")]
    pub size: String,

    /// Procedural shot length in seconds.
    #[arg(long, value_name = "SEC", default_value_t = 5.0)]
    pub shot_seconds: f64,

    /// Corpus dataset name.
    #[arg(long, default_value = "synthetic")]
    pub name: String,

    /// Corpus quality tier: very_high, high or medium.
    #[arg(long, default_value = "very_high")]
    pub quality: String,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[arg(long = "in", value_name = "CLIP")]
    pub input: PathBuf,

    #[arg(long, value_name = "CLIP")]
    pub out: PathBuf,

    /// Write color and flow as one 6-channel clip.
    #[arg(long)]
    pub fuse: bool,

    /// Frame distance of each flow pair.
    #[arg(long)]
    pub stride: Option<usize>,

    #[arg(long)]
    pub block: Option<u32>,

    #[arg(long)]
    pub radius: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DetectorKind {
    Content,
    Hist,
    Adaptive,
    Threshold,
    Oracle,
    External,
}

/// Detector selection shared by `detect` and `bench`.
#[derive(Debug, Args)]
pub struct DetectorArgs {
    #[arg(long, value_enum)]
    pub detector: DetectorKind,

    /// Threshold of the chosen heuristic (dark level for `threshold`).
    #[arg(long)]
    pub threshold: Option<f64>,

    /// External detector executable; it receives the window clip path last.
    #[arg(long, value_name = "EXE")]
    pub cmd: Option<String>,

    /// Extra argument passed to the external detector before the clip path.
    #[arg(long = "cmd-arg", value_name = "ARG", allow_hyphen_values = true)]
    pub cmd_args: Vec<String>,

    /// External detector timeout per window.
    #[arg(long, value_name = "SEC")]
    pub timeout: Option<f64>,

    /// Oracle seed; required for `--detector oracle`.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Oracle boundary jitter in seconds.
    #[arg(long, value_name = "SEC", default_value_t = 0.0)]
    pub jitter: f64,

    /// Oracle drop probability.
    #[arg(long, value_name = "P", default_value_t = 0.0)]
    pub drop: f64,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    #[arg(long, value_name = "SEC")]
    pub window: Option<f64>,

    #[arg(long, value_name = "SEC")]
    pub stride: Option<f64>,

    #[arg(long = "nms-iou", value_name = "IOU")]
    pub nms_iou: Option<f64>,

    /// Join detections separated by less than this gap.
    #[arg(long = "min-gap", value_name = "SEC")]
    pub min_gap: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub detector: DetectorArgs,

    #[command(flatten)]
    pub window: WindowArgs,

    #[arg(long, value_name = "PATH")]
    pub clip: PathBuf,

    /// Labels driving the oracle detector.
    #[arg(long, value_name = "PATH")]
    pub labels: Option<PathBuf>,

    /// Prediction JSON; stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Table,
    Json,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_name = "PATH")]
    pub preds: PathBuf,

    #[arg(long, value_name = "PATH")]
    pub labels: PathBuf,

    /// Must agree with the label file when given.
    #[arg(long)]
    pub fps: Option<String>,

    /// `start:end:step`, a comma list, or one value.
    #[arg(long, value_name = "GRID")]
    pub tau: Option<String>,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,

    /// Video name used in CSV rows.
    #[arg(long)]
    pub name: Option<String>,

    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_name = "JSON", required = true)]
    pub manifest: Vec<PathBuf>,

    #[command(flatten)]
    pub detector: DetectorArgs,

    #[command(flatten)]
    pub window: WindowArgs,

    #[arg(long, value_name = "GRID")]
    pub tau: Option<String>,

    /// CSV report; stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Full JSON report, readable by `report`.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// JSON from `bench --json` or `eval --format json`.
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,

    #[arg(long, default_value = "detector")]
    pub method: String,

    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}
