use std::fmt::Write;

use super::MetricsReport;

pub const CSV_HEADER: &str =
    "video,tau,seg_tp,seg_fp,seg_fn,seg_p,seg_r,seg_f1,frame_tp,frame_fp,frame_fn,frame_p,frame_r,frame_f1,abe_s,rtf";

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:.6}"))
}

impl MetricsReport {
    /// One row per tolerance plus a `mean` row, without header.
    pub fn csv_rows(&self, video: &str) -> String {
        let mut s = String::new();
        for r in &self.taus {
            let (sc, fc) = (r.seg_counts, r.frame_counts);
            let _ = writeln!(
                s,
                "{video},{:.3},{},{},{},{:.6},{:.6},{:.6},{},{},{},{:.6},{:.6},{:.6},{},{:.6}",
                r.tau, sc.tp, sc.fp, sc.fn_, r.seg.precision, r.seg.recall, r.seg.f1, fc.tp, fc.fp, fc.fn_, r.frame.precision,
                r.frame.recall, r.frame.f1, opt(r.abe_s), self.rtf
            );
        }
        let m = &self.mean;
        let _ = writeln!(
            s,
            "{video},mean,,,,{:.6},{:.6},{:.6},,,,{:.6},{:.6},{:.6},{},{:.6}",
            m.seg.precision, m.seg.recall, m.seg.f1, m.frame.precision, m.frame.recall, m.frame.f1, opt(m.abe_s), self.rtf
        );
        s
    }

    pub fn to_csv(&self, video: &str) -> String {
        format!("{CSV_HEADER}\n{}", self.csv_rows(video))
    }

    /// Markdown table: segment and frame P/R/F1 (tolerance means), mean ABE,
    /// ABE at zero tolerance and RTF.
    pub fn table_row(&self, name: &str) -> String {
        let m = &self.mean;
        let abe = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.3}"));
        format!(
            "| {name} | {:.1} | {:.1} | {:.1} | {:.1} | {:.1} | {:.1} | {} | {} | {:.3} |",
            100.0 * m.seg.precision,
            100.0 * m.seg.recall,
            100.0 * m.seg.f1,
            100.0 * m.frame.precision,
            100.0 * m.frame.recall,
            100.0 * m.frame.f1,
            abe(m.abe_s),
            abe(self.abe_at_zero()),
            self.rtf
        )
    }

    pub fn table_header() -> &'static str {
        "| Method | Seg P | Seg R | Seg F1 | Frame P | Frame R | Frame F1 | mABE (s) | ABE@0 (s) | RTF |\n\
         |---|---:|---:|---:|---:|---:|---:|---:|---:|---:|"
    }

    pub fn to_table(&self, name: &str) -> String {
        format!("{}\n{}\n", Self::table_header(), self.table_row(name))
    }

    /// Markdown table of per-bucket recall and frame F1 (tolerance means).
    pub fn category_table(&self) -> String {
        let mut s = String::from("| Category | GT | Seg R | Frame F1 |\n|---|---:|---:|---:|\n");
        for c in &self.categories {
            let _ = writeln!(
                s,
                "| {} | {} | {:.1} | {:.1} |",
                c.category,
                c.gt_count(),
                100.0 * c.mean_recall,
                100.0 * c.mean_frame_f1
            );
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use crate::detect::DetectionResult;
    use crate::metrics::{default_tau_grid, evaluate, MetricsReport};
    use crate::segment::{Segment, TransitionLabel};
    use crate::video::Fps;

    fn report() -> MetricsReport {
        let preds = DetectionResult {
            segments: vec![Segment::new(1.0, 2.0)],
            wall_time_s: 0.5,
            io_time_s: 0.0,
        };
        evaluate(&preds, &[TransitionLabel::new(1.0, 2.0, "fade")], Fps::integer(25), 10.0, &default_tau_grid()).unwrap()
    }

    #[test]
    fn csv_shape() {
        let csv = report().to_csv("v0");
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 8);
        let cols = lines[0].split(',').count();
        assert!(lines.iter().all(|l| l.split(',').count() == cols));
        assert!(lines[1].starts_with("v0,0.000,1,0,0,1.000000"));
        assert!(lines[7].starts_with("v0,mean,"));
    }

    #[test]
    fn table_shape() {
        let t = report().to_table("oracle");
        assert!(t.contains("| oracle | 100.0 | 100.0 | 100.0 | 100.0 | 100.0 | 100.0 | 0.000 | 0.000 | 0.050 |"));
        assert!(report().category_table().contains("| Normal | 1 | 100.0 |"));
    }
}
