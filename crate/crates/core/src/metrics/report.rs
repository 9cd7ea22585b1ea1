use serde::{Deserialize, Serialize};

use super::matching::expand_ns;
use super::{frame_prf_counts, greedy_match, segment_counts, to_ns, union_segments, Counts, MatchSet, NsSegment, Prf, UnionGroup};
use crate::bench::{categorize_duration, Category};
use crate::detect::DetectionResult;
use crate::error::{Error, Result};
use crate::segment::TransitionLabel;
use crate::video::Fps;

/// `{0.0, 0.1, ..., 0.5}` seconds.
pub fn default_tau_grid() -> Vec<f64> {
    (0..=5).map(|k| k as f64 / 10.0).collect()
}

/// Parses `start:stop:step`, a comma list, or a single value.
pub fn parse_tau_grid(s: &str) -> Result<Vec<f64>> {
    let num = |t: &str| -> Result<f64> { t.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad tolerance `{t}`"))) };
    let grid: Vec<f64> = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("tolerance range `{s}` must be start:stop:step")));
        }
        let (a, b, st) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(st > 0.0) || b < a {
            return Err(Error::Parse(format!("empty tolerance range `{s}`")));
        }
        let n = ((b - a) / st + 1e-9).floor() as usize;
        (0..=n).map(|k| ((a + k as f64 * st) * 1e9).round() / 1e9).collect()
    } else {
        s.split(',').map(num).collect::<Result<_>>()?
    };
    if grid.is_empty() || grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::Parse(format!("tolerances in `{s}` must be finite and non-negative")));
    }
    Ok(grid)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauRow {
    pub tau: f64,
    pub seg_counts: Counts,
    pub seg: Prf,
    pub frame_counts: Counts,
    pub frame: Prf,
    /// Absent when nothing matched.
    pub abe_s: Option<f64>,
    pub abe_sum_s: f64,
    pub matched_pairs: u64,
}

impl TauRow {
    fn from_counts(tau: f64, seg_counts: Counts, frame_counts: Counts, abe_sum_ns: i128, pairs: u64) -> Self {
        let abe_sum_s = abe_sum_ns as f64 * 1e-9;
        TauRow {
            tau,
            seg_counts,
            seg: seg_counts.prf(),
            frame_counts,
            frame: frame_counts.prf(),
            abe_s: (pairs > 0).then(|| abe_sum_ns as f64 / (2.0 * pairs as f64) * 1e-9),
            abe_sum_s,
            matched_pairs: pairs,
        }
    }
}

/// Arithmetic means of the per-tolerance rows.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MeanRow {
    pub seg: Prf,
    pub frame: Prf,
    /// Mean over tolerances where ABE is defined.
    pub abe_s: Option<f64>,
}

impl MeanRow {
    fn of(rows: &[TauRow]) -> Self {
        let n = rows.len().max(1) as f64;
        let mean = |f: &dyn Fn(&TauRow) -> f64| rows.iter().map(f).sum::<f64>() / n;
        let abes: Vec<f64> = rows.iter().filter_map(|r| r.abe_s).collect();
        MeanRow {
            seg: Prf {
                precision: mean(&|r| r.seg.precision),
                recall: mean(&|r| r.seg.recall),
                f1: mean(&|r| r.seg.f1),
            },
            frame: Prf {
                precision: mean(&|r| r.frame.precision),
                recall: mean(&|r| r.frame.recall),
                f1: mean(&|r| r.frame.f1),
            },
            abe_s: (!abes.is_empty()).then(|| abes.iter().sum::<f64>() / abes.len() as f64),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CategoryTauRow {
    pub tau: f64,
    pub gt: u64,
    pub matched: u64,
    pub recall: f64,
    pub frame_counts: Counts,
    pub frame: Prf,
}

impl CategoryTauRow {
    fn from_counts(tau: f64, gt: u64, matched: u64, frame_counts: Counts) -> Self {
        CategoryTauRow {
            tau,
            gt,
            matched,
            recall: if gt == 0 { 0.0 } else { matched as f64 / gt as f64 },
            frame_counts,
            frame: frame_counts.prf(),
        }
    }
}

/// Ground truth restricted to one duration bucket. Other buckets' ground
/// truths and the predictions matched to them are set aside; unmatched
/// predictions stay as false positives.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CategoryReport {
    pub category: Category,
    pub rows: Vec<CategoryTauRow>,
    pub mean_recall: f64,
    pub mean_frame_f1: f64,
}

impl CategoryReport {
    fn new(category: Category, rows: Vec<CategoryTauRow>) -> Self {
        let n = rows.len().max(1) as f64;
        CategoryReport {
            category,
            mean_recall: rows.iter().map(|r| r.recall).sum::<f64>() / n,
            mean_frame_f1: rows.iter().map(|r| r.frame.f1).sum::<f64>() / n,
            rows,
        }
    }

    pub fn gt_count(&self) -> u64 {
        self.rows.first().map_or(0, |r| r.gt)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub taus: Vec<TauRow>,
    pub mean: MeanRow,
    pub inference_s: f64,
    pub video_s: f64,
    pub rtf: f64,
    pub categories: Vec<CategoryReport>,
}

impl MetricsReport {
    pub fn tau_grid(&self) -> Vec<f64> {
        self.taus.iter().map(|r| r.tau).collect()
    }

    pub fn category(&self, c: Category) -> Option<&CategoryReport> {
        self.categories.iter().find(|r| r.category == c)
    }

    /// ABE at zero tolerance, when the grid includes it.
    pub fn abe_at_zero(&self) -> Option<f64> {
        self.taus.iter().find(|r| r.tau == 0.0).and_then(|r| r.abe_s)
    }
}

/// Absolute boundary error over matched pairs, measured on the original
/// (unexpanded) spans; `None` without matches.
pub fn abe(m: &MatchSet, original_preds: &[NsSegment], original_gts: &[NsSegment]) -> Option<f64> {
    if m.pairs.is_empty() {
        return None;
    }
    let sum: i128 = m
        .pairs
        .iter()
        .map(|p| {
            let (a, b) = (original_preds[p.pred], original_gts[p.gt]);
            ((b.start - a.start).abs() + (b.end - a.end).abs()) as i128
        })
        .sum();
    Some(sum as f64 / (2.0 * m.pairs.len() as f64) * 1e-9)
}

fn hull_of(group: &UnionGroup, originals: &[NsSegment]) -> NsSegment {
    group
        .members
        .iter()
        .map(|&i| originals[i])
        .reduce(|a, b| a.hull(&b))
        .expect("groups are non-empty")
}

fn validate(preds: &DetectionResult, labels: &[TransitionLabel], duration: f64, taus: &[f64]) -> Result<()> {
    if !(duration > 0.0) || !duration.is_finite() {
        return Err(Error::pre(format!("duration {duration} must be positive")));
    }
    if taus.is_empty() || taus.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::pre("tolerance grid must be non-empty and non-negative"));
    }
    let bad = preds.segments.iter().any(|s| !s.is_valid()) || labels.iter().any(|l| !l.segment().is_valid());
    if bad {
        return Err(Error::pre("segments need finite start <= end"));
    }
    if !(preds.wall_time_s >= 0.0) {
        return Err(Error::pre("inference time must be non-negative"));
    }
    Ok(())
}

/// Scores predictions against labels at every tolerance in `taus`.
///
/// Per tolerance: both sides are expanded and internally unioned, greedily
/// matched, and scored at segment and frame level; ABE uses the original
/// spans of the matched units.
pub fn evaluate(preds: &DetectionResult, labels: &[TransitionLabel], fps: Fps, duration: f64, taus: &[f64]) -> Result<MetricsReport> {
    validate(preds, labels, duration, taus)?;
    let dur_ns = (duration * 1e9).round() as i64;
    let p_orig: Vec<NsSegment> = preds.segments.iter().map(to_ns).collect();
    let g_orig: Vec<NsSegment> = labels.iter().map(|l| to_ns(&l.segment())).collect();

    let mut rows = Vec::with_capacity(taus.len());
    let mut cat_rows: Vec<Vec<CategoryTauRow>> = vec![Vec::new(); Category::ALL.len()];
    for &tau in taus {
        let t_ns = (tau * 1e9).round() as i64;
        let pg = union_segments(&p_orig.iter().map(|s| expand_ns(s, t_ns, dur_ns)).collect::<Vec<_>>());
        let gg = union_segments(&g_orig.iter().map(|s| expand_ns(s, t_ns, dur_ns)).collect::<Vec<_>>());
        let p_span: Vec<NsSegment> = pg.iter().map(|g| g.span).collect();
        let g_span: Vec<NsSegment> = gg.iter().map(|g| g.span).collect();
        let m = greedy_match(&p_span, &g_span);

        let p_hull: Vec<NsSegment> = pg.iter().map(|g| hull_of(g, &p_orig)).collect();
        let g_hull: Vec<NsSegment> = gg.iter().map(|g| hull_of(g, &g_orig)).collect();
        let abe_sum: i128 = m
            .pairs
            .iter()
            .map(|p| ((g_hull[p.gt].start - p_hull[p.pred].start).abs() + (g_hull[p.gt].end - p_hull[p.pred].end).abs()) as i128)
            .sum();
        rows.push(TauRow::from_counts(
            tau,
            segment_counts(&m),
            frame_prf_counts(&m, &p_span, &g_span, fps),
            abe_sum,
            m.pairs.len() as u64,
        ));

        let g_cat: Vec<Category> = g_hull.iter().map(|h| categorize_duration(h.to_segment().duration())).collect();
        for (ci, &cat) in Category::ALL.iter().enumerate() {
            let keep_g: Vec<usize> = (0..gg.len()).filter(|&i| g_cat[i] == cat).collect();
            let pairs: Vec<_> = m.pairs.iter().filter(|p| g_cat[p.gt] == cat).collect();
            let keep_p: Vec<usize> = pairs.iter().map(|p| p.pred).chain(m.unmatched_preds.iter().copied()).collect();
            let rp = |i: usize| keep_p.iter().position(|&k| k == i).expect("kept");
            let rg = |i: usize| keep_g.iter().position(|&k| k == i).expect("kept");
            let sub = MatchSet {
                pairs: pairs
                    .iter()
                    .map(|p| super::matching::MatchPair {
                        pred: rp(p.pred),
                        gt: rg(p.gt),
                        intersection_ns: p.intersection_ns,
                    })
                    .collect(),
                unmatched_preds: Vec::new(),
                unmatched_gts: Vec::new(),
            };
            let sp: Vec<NsSegment> = keep_p.iter().map(|&i| p_span[i]).collect();
            let sg: Vec<NsSegment> = keep_g.iter().map(|&i| g_span[i]).collect();
            let fc = frame_prf_counts(&sub, &sp, &sg, fps);
            cat_rows[ci].push(CategoryTauRow::from_counts(tau, keep_g.len() as u64, pairs.len() as u64, fc));
        }
    }
    let video_s = duration;
    Ok(MetricsReport {
        mean: MeanRow::of(&rows),
        taus: rows,
        inference_s: preds.wall_time_s,
        video_s,
        rtf: super::rtf(preds.wall_time_s, video_s)?,
        categories: Category::ALL.iter().zip(cat_rows).map(|(&c, r)| CategoryReport::new(c, r)).collect(),
    })
}

/// Micro-average: sums counts across reports, then recomputes every ratio.
pub fn aggregate(reports: &[MetricsReport]) -> Result<MetricsReport> {
    let first = reports.first().ok_or_else(|| Error::pre("nothing to aggregate"))?;
    let grid = first.tau_grid();
    if reports.iter().any(|r| r.tau_grid() != grid) {
        return Err(Error::pre("reports use different tolerance grids"));
    }
    let rows: Vec<TauRow> = (0..grid.len())
        .map(|k| {
            let seg: Counts = reports.iter().map(|r| r.taus[k].seg_counts).sum();
            let frame: Counts = reports.iter().map(|r| r.taus[k].frame_counts).sum();
            let pairs: u64 = reports.iter().map(|r| r.taus[k].matched_pairs).sum();
            let abe_ns: i128 = reports.iter().map(|r| (r.taus[k].abe_sum_s * 1e9).round() as i128).sum();
            TauRow::from_counts(grid[k], seg, frame, abe_ns, pairs)
        })
        .collect();
    let categories = Category::ALL
        .iter()
        .map(|&c| {
            let rows = (0..grid.len())
                .map(|k| {
                    let pick = |r: &MetricsReport| r.category(c).map(|cr| cr.rows[k].clone());
                    let parts: Vec<CategoryTauRow> = reports.iter().filter_map(pick).collect();
                    CategoryTauRow::from_counts(
                        grid[k],
                        parts.iter().map(|p| p.gt).sum(),
                        parts.iter().map(|p| p.matched).sum(),
                        parts.iter().map(|p| p.frame_counts).sum(),
                    )
                })
                .collect();
            CategoryReport::new(c, rows)
        })
        .collect();
    let inference_s: f64 = reports.iter().map(|r| r.inference_s).sum();
    let video_s: f64 = reports.iter().map(|r| r.video_s).sum();
    Ok(MetricsReport {
        mean: MeanRow::of(&rows),
        taus: rows,
        inference_s,
        video_s,
        rtf: super::rtf(inference_s, video_s)?,
        categories,
    })
}
