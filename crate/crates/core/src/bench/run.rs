use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::DatasetManifest;
use crate::detect::{oracle_segments, DetectorSpec, OracleParams};
use crate::error::{Error, Result};
use crate::metrics::{aggregate, evaluate, MeanRow, MetricsReport, Prf};
use crate::synth::LabelFile;
use crate::video::load_rawvid;
use crate::windowing::{run_pipeline, PipelineOptions};

/// Detector used for a benchmark run. The oracle needs each video's labels,
/// so it is built per video.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchDetector {
    Spec(DetectorSpec),
    Oracle(OracleParams),
}

impl BenchDetector {
    pub fn name(&self) -> &'static str {
        match self {
            BenchDetector::Spec(s) => s.name(),
            BenchDetector::Oracle(_) => "oracle",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VideoOutcome {
    pub dataset: String,
    pub video: String,
    pub report: MetricsReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VideoFailure {
    pub dataset: String,
    pub video: String,
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub name: String,
    /// Micro-average over the dataset's videos.
    pub report: MetricsReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    /// Micro-average over every video of every dataset.
    pub micro: Option<MetricsReport>,
    pub datasets: Vec<DatasetSummary>,
    /// Arithmetic mean of the per-dataset mean rows.
    pub macro_mean: Option<MeanRow>,
    pub videos: Vec<VideoOutcome>,
    pub failures: Vec<VideoFailure>,
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let mut s = format!("{}\n", crate::metrics::CSV_HEADER);
        for v in &self.videos {
            s.push_str(&v.report.csv_rows(&format!("{}/{}", v.dataset, v.video)));
        }
        if let Some(m) = &self.micro {
            s.push_str(&m.csv_rows("ALL"));
        }
        s
    }

    pub fn to_table(&self, method: &str) -> String {
        let mut s = String::from(MetricsReport::table_header());
        s.push('\n');
        for d in &self.datasets {
            s.push_str(&d.report.table_row(&format!("{method} [{}]", d.name)));
            s.push('\n');
        }
        if let Some(m) = &self.micro {
            s.push_str(&m.table_row(&format!("{method} [micro]")));
            s.push('\n');
        }
        if let Some(m) = &self.macro_mean {
            let abe = m.abe_s.map_or_else(|| "n/a".into(), |x| format!("{x:.3}"));
            s.push_str(&format!(
                "| {method} [macro] | {:.1} | {:.1} | {:.1} | {:.1} | {:.1} | {:.1} | {abe} | | |\n",
                100.0 * m.seg.precision,
                100.0 * m.seg.recall,
                100.0 * m.seg.f1,
                100.0 * m.frame.precision,
                100.0 * m.frame.recall,
                100.0 * m.frame.f1,
            ));
        }
        if let Some(m) = &self.micro {
            s.push('\n');
            s.push_str(&m.category_table());
        }
        s
    }
}

fn run_video(manifest: &DatasetManifest, idx: usize, detector: &BenchDetector, opts: &PipelineOptions, taus: &[f64]) -> Result<MetricsReport> {
    let entry = &manifest.entries[idx];
    let clip = load_rawvid(&entry.video)?;
    let labels = LabelFile::load(&entry.labels)?;
    labels.validate()?;
    if clip.fps() != entry.fps || labels.fps != entry.fps {
        return Err(Error::Inconsistent(format!(
            "frame rate mismatch: manifest {}, video {}, labels {}",
            entry.fps,
            clip.fps(),
            labels.fps
        )));
    }
    let spec = match detector {
        BenchDetector::Spec(s) => s.clone(),
        BenchDetector::Oracle(p) => DetectorSpec::Oracle {
            segments: oracle_segments(&labels.transitions, p, clip.duration())?,
        },
    };
    let result = run_pipeline(&clip, &spec, opts)?;
    evaluate(&result, &labels.transitions, clip.fps(), clip.duration(), taus)
}

fn mean_rows(rows: &[&MeanRow]) -> MeanRow {
    let n = rows.len() as f64;
    let avg = |f: &dyn Fn(&MeanRow) -> f64| rows.iter().map(|r| f(r)).sum::<f64>() / n;
    let abes: Vec<f64> = rows.iter().filter_map(|r| r.abe_s).collect();
    MeanRow {
        seg: Prf {
            precision: avg(&|r| r.seg.precision),
            recall: avg(&|r| r.seg.recall),
            f1: avg(&|r| r.seg.f1),
        },
        frame: Prf {
            precision: avg(&|r| r.frame.precision),
            recall: avg(&|r| r.frame.recall),
            f1: avg(&|r| r.frame.f1),
        },
        abe_s: (!abes.is_empty()).then(|| abes.iter().sum::<f64>() / abes.len() as f64),
    }
}

/// Runs the windowed pipeline and evaluation over every manifest entry.
/// Failing videos are recorded and left out of the aggregates.
pub fn run_benchmark(manifests: &[DatasetManifest], detector: &BenchDetector, opts: &PipelineOptions, taus: &[f64]) -> Result<BenchReport> {
    if manifests.is_empty() || manifests.iter().all(|m| m.entries.is_empty()) {
        return Err(Error::pre("no videos to benchmark"));
    }
    let jobs: Vec<(usize, usize)> = manifests
        .iter()
        .enumerate()
        .flat_map(|(mi, m)| (0..m.entries.len()).map(move |ei| (mi, ei)))
        .collect();
    let results: Vec<Result<MetricsReport>> = jobs
        .par_iter()
        .map(|&(mi, ei)| run_video(&manifests[mi], ei, detector, opts, taus))
        .collect();

    let mut videos = Vec::new();
    let mut failures = Vec::new();
    for (&(mi, ei), r) in jobs.iter().zip(results) {
        let dataset = manifests[mi].name.clone();
        let video = manifests[mi].entries[ei].video.display().to_string();
        match r {
            Ok(report) => videos.push(VideoOutcome { dataset, video, report }),
            Err(e) => {
                tracing::warn!(dataset = %dataset, video = %video, error = %e, "video failed");
                failures.push(VideoFailure {
                    dataset,
                    video,
                    kind: e.kind().into(),
                    message: e.to_string(),
                });
            }
        }
    }
    let all: Vec<MetricsReport> = videos.iter().map(|v| v.report.clone()).collect();
    let micro = if all.is_empty() { None } else { Some(aggregate(&all)?) };
    let mut datasets = Vec::new();
    for m in manifests {
        let mine: Vec<MetricsReport> = videos.iter().filter(|v| v.dataset == m.name).map(|v| v.report.clone()).collect();
        if !mine.is_empty() {
            datasets.push(DatasetSummary {
                name: m.name.clone(),
                report: aggregate(&mine)?,
            });
        }
    }
    let macro_mean = (!datasets.is_empty()).then(|| mean_rows(&datasets.iter().map(|d| &d.report.mean).collect::<Vec<_>>()));
    Ok(BenchReport {
        micro,
        datasets,
        macro_mean,
        videos,
        failures,
    })
}
