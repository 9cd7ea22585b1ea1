use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn stdkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stdkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr_last(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).lines().last().unwrap_or_default().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn assert_diagnostic(o: &Output, code: i32) {
    assert_eq!(o.status.code(), Some(code), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let line = stderr_last(o);
    let prefix = format!("error: code={code} kind=");
    assert!(line.starts_with(&prefix) && line.contains(" msg=\""), "{line}");
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

/// Two procedural shots spliced into `clip.stdv` with `clip.json` labels.
fn synth_clip(dir: &TempDir) -> (String, String) {
    let out = p(dir, "clip.stdv");
    let o = stdkit(&["synth", "--procedural", "3", "--seed", "5", "--size", "32x24", "--shot-seconds", "4", "--out", &out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    (out, p(dir, "clip.json"))
}

fn labels_as_preds(labels: &str, dest: &Path) {
    let doc: Value = serde_json::from_str(&fs::read_to_string(labels).unwrap()).unwrap();
    let segs: Vec<Value> = doc["transitions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| serde_json::json!({"start": t["start"], "end": t["end"]}))
        .collect();
    fs::write(dest, serde_json::to_string(&segs).unwrap()).unwrap();
}

#[test]
fn no_arguments_is_a_usage_error() {
    let o = stdkit(&[]);
    assert_diagnostic(&o, 64);
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn unknown_subcommand_and_flag() {
    assert_diagnostic(&stdkit(&["frobnicate"]), 64);
    assert_diagnostic(&stdkit(&["eval", "--bogus"]), 64);
}

#[test]
fn help_per_subcommand() {
    for sub in ["synth", "flow", "detect", "eval", "bench", "report"] {
        let o = stdkit(&[sub, "--help"]);
        assert!(o.status.success());
        assert!(stdout(&o).contains("Usage: stdkit"), "{sub}");
    }
}

#[test]
fn synth_then_eval_labels_is_perfect() {
    let dir = tempfile::tempdir().unwrap();
    let (_, labels) = synth_clip(&dir);
    let doc: Value = serde_json::from_str(&fs::read_to_string(&labels).unwrap()).unwrap();
    assert_eq!(doc["transitions"].as_array().unwrap().len(), 2);
    assert_eq!(doc["fps"], serde_json::json!([25, 1]));

    let preds = dir.path().join("preds.json");
    labels_as_preds(&labels, &preds);
    let o = stdkit(&["eval", "--preds", preds.to_str().unwrap(), "--labels", &labels, "--fps", "25"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("video,tau,"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 7);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[7], "1.000000", "{row}");
        assert_eq!(cols[13], "1.000000", "{row}");
    }
}

#[test]
fn eval_fps_mismatch_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let (_, labels) = synth_clip(&dir);
    let preds = dir.path().join("preds.json");
    fs::write(&preds, "[]").unwrap();
    assert_diagnostic(&stdkit(&["eval", "--preds", preds.to_str().unwrap(), "--labels", &labels, "--fps", "30"]), 65);
}

#[test]
fn input_errors_have_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (_, labels) = synth_clip(&dir);
    assert_diagnostic(&stdkit(&["eval", "--preds", &p(&dir, "missing.json"), "--labels", &labels]), 66);
    let bad = p(&dir, "bad.json");
    fs::write(&bad, "{not json").unwrap();
    assert_diagnostic(&stdkit(&["eval", "--preds", &bad, "--labels", &labels]), 65);
    let junk = p(&dir, "junk.stdv");
    fs::write(&junk, b"NOTAVIDEO").unwrap();
    assert_diagnostic(&stdkit(&["detect", "--detector", "content", "--clip", &junk]), 65);
}

#[test]
fn stride_above_window_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let (clip, _) = synth_clip(&dir);
    let o = stdkit(&["detect", "--detector", "content", "--clip", &clip, "--window", "5", "--stride", "9"]);
    assert_diagnostic(&o, 64);
    assert!(stderr_last(&o).contains("stride"));
}

#[test]
fn oracle_needs_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (clip, labels) = synth_clip(&dir);
    assert_diagnostic(&stdkit(&["detect", "--detector", "oracle", "--clip", &clip, "--labels", &labels]), 64);
}

#[test]
fn oracle_detection_round_trips_through_eval() {
    let dir = tempfile::tempdir().unwrap();
    let (clip, labels) = synth_clip(&dir);
    let preds = p(&dir, "preds.json");
    let o = stdkit(&[
        "detect", "--detector", "oracle", "--seed", "1", "--clip", &clip, "--labels", &labels, "--out", &preds,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = stdkit(&["eval", "--preds", &preds, "--labels", &labels, "--format", "json"]);
    assert!(o.status.success());
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["mean"]["seg"]["f1"], 1.0);

    let rpt = p(&dir, "report.json");
    fs::write(&rpt, stdout(&o)).unwrap();
    let o = stdkit(&["report", "--in", &rpt, "--method", "oracle"]);
    assert!(o.status.success());
    let md = stdout(&o);
    assert!(md.contains("| Method | Seg P |") && md.contains("| oracle | 100.0 |"), "{md}");
}

#[test]
fn content_detector_emits_result_json() {
    let dir = tempfile::tempdir().unwrap();
    let (clip, _) = synth_clip(&dir);
    let o = stdkit(&["detect", "--detector", "content", "--clip", &clip]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["segments"].is_array());
    assert!(v["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn flow_writes_plain_and_fused_containers() {
    let dir = tempfile::tempdir().unwrap();
    let (clip, _) = synth_clip(&dir);
    let plain = p(&dir, "flow.stdv");
    let fused = p(&dir, "fused.stdv");
    assert!(stdkit(&["flow", "--in", &clip, "--out", &plain, "--block", "8", "--radius", "2"]).status.success());
    assert!(stdkit(&["flow", "--in", &clip, "--out", &fused, "--fuse", "--block", "8", "--radius", "2"]).status.success());
    let (a, b, src) = (fs::read(&plain).unwrap(), fs::read(&fused).unwrap(), fs::read(&clip).unwrap());
    assert_eq!(&a[..8], b"STDVID01");
    assert_eq!(&b[..8], b"STDVF601");
    assert_eq!(a.len(), src.len());
    assert_eq!(b.len() - 32, 2 * (src.len() - 32));
}

#[test]
fn config_file_then_flags_take_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let (_, labels) = synth_clip(&dir);
    let preds = dir.path().join("preds.json");
    labels_as_preds(&labels, &preds);
    let cfg = p(&dir, "cfg.json");
    fs::write(&cfg, r#"{"tau": [0.2, 0.4]}"#).unwrap();
    let base = ["eval", "--preds", preds.to_str().unwrap(), "--labels", &labels];
    let taus = |extra: &[&str]| -> Vec<String> {
        let o = stdkit(&[&base[..], extra].concat());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        stdout(&o).lines().skip(1).map(|l| l.split(',').nth(1).unwrap().to_string()).collect()
    };
    assert_eq!(taus(&[]), ["0.000", "0.100", "0.200", "0.300", "0.400", "0.500", "mean"]);
    assert_eq!(taus(&["--config", &cfg]), ["0.200", "0.400", "mean"]);
    assert_eq!(taus(&["--config", &cfg, "--tau", "0.3"]), ["0.300", "mean"]);

    fs::write(&cfg, r#"{"stride_s": 12.0}"#).unwrap();
    let (clip, _) = (p(&dir, "clip.stdv"), ());
    assert_diagnostic(&stdkit(&["detect", "--detector", "content", "--clip", &clip, "--config", &cfg]), 64);
    let o = stdkit(&["detect", "--detector", "content", "--clip", &clip, "--config", &cfg, "--window", "15"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    fs::write(&cfg, r#"{"unknown_key": 1}"#).unwrap();
    assert_diagnostic(&stdkit(&["detect", "--detector", "content", "--clip", &clip, "--config", &cfg]), 64);
}

#[test]
fn bench_over_corpus_and_partial_failure() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = p(&dir, "corpus");
    let o = stdkit(&["synth", "--corpus", "3", "--seed", "9", "--size", "16x12", "--out", &corpus, "--quality", "high"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let manifest = format!("{corpus}/manifest.json");
    let json = p(&dir, "bench.json");
    let o = stdkit(&["bench", "--manifest", &manifest, "--detector", "oracle", "--seed", "3", "--json", &json, "--jobs", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = stdout(&o);
    assert_eq!(csv.lines().filter(|l| l.contains(",mean,")).count(), 4);
    let o = stdkit(&["report", "--in", &json, "--method", "oracle"]);
    assert!(stdout(&o).contains("oracle [micro]"));

    fs::write(format!("{corpus}/video_001.stdv"), b"garbage").unwrap();
    let o = stdkit(&["bench", "--manifest", &manifest, "--detector", "content"]);
    assert_diagnostic(&o, 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning: video="));
}

#[test]
fn trace_emits_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let (clip, _) = synth_clip(&dir);
    let o = stdkit(&["--trace", "detect", "--detector", "content", "--clip", &clip]);
    assert!(o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    let lines: Vec<&str> = err.lines().collect();
    assert!(!lines.is_empty());
    for l in &lines {
        let v: Value = serde_json::from_str(l).unwrap_or_else(|_| panic!("not JSON: {l}"));
        assert!(v["level"].is_string());
    }
    assert!(lines.iter().any(|l| l.contains("stdkit::window")));
}
