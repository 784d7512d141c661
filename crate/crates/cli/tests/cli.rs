use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ballmapper::synthdata::{generate, write_raw_csv, ScenarioSpec};
use ballmapper::GraphDocument;
use ballmapper_cli::commands::{build_document, locate_point, render_document, OutputFormat, RenderOptions};
use ballmapper_cli::config::{IngestArgs, InputMode, RunConfig};
use ballmapper::NeighborSearch;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ballmapper"))
        .args(args)
        .output()
        .unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn scenario(dir: &Path) -> PathBuf {
    let path = dir.join("firms.csv");
    let rows = generate(&ScenarioSpec::two_cluster_default(), 7).unwrap();
    write_raw_csv(&rows, std::fs::File::create(&path).unwrap()).unwrap();
    path
}

fn config(input: &Path, epsilon: f64) -> RunConfig {
    RunConfig {
        ingest: IngestArgs {
            input: Some(input.to_path_buf()),
            ..IngestArgs::default()
        },
        epsilon,
        order_seed: None,
        neighbor_search: NeighborSearch::LinearScan,
        colorations: Vec::new(),
        output: input.with_extension("json"),
    }
}

#[test]
fn missing_column_exits_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.csv");
    std::fs::write(&input, "act,lct,at\n1,2,3\n").unwrap();
    let out = bin(&["build", "--input", p(&input), "--epsilon", "0.3", "--out", p(&dir.path().join("g.json"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing column"));
}

#[test]
fn bad_epsilon_and_thread_count_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let input = scenario(dir.path());
    let out = bin(&["build", "--input", p(&input), "--epsilon", "-1", "--out", p(&dir.path().join("g.json"))]);
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_ballmapper"))
        .env("BM_THREADS", "many")
        .args(["synth", "--out", p(&dir.path().join("s.csv"))])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn regression_ball_count_for_default_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let (doc, manifest) = build_document(&config(&scenario(dir.path()), 0.4)).unwrap();
    assert_eq!(manifest.points, 1000);
    // frozen from the reference run
    assert_eq!((manifest.balls, manifest.edges), (10, 20));
    assert_eq!(doc.balls.len(), 10);
    assert!(doc.colorations.contains_key("z_score:mean"));
    assert!(doc.colorations.contains_key("failed:proportion"));
}

#[test]
fn graph_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (doc, _) = build_document(&config(&scenario(dir.path()), 0.3)).unwrap();
    let json = doc.to_json().unwrap();
    let back = GraphDocument::from_json(&json).unwrap();
    assert_eq!(back, doc);
    assert_eq!(back.to_json().unwrap(), json);
}

#[test]
fn replay_detects_changed_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = scenario(dir.path());
    let graph = dir.path().join("g.json");
    let out = bin(&["build", "--input", p(&input), "--epsilon", "0.4", "--out", p(&graph)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest = dir.path().join("g.json.manifest.json");
    assert!(manifest.exists());

    let mut text = std::fs::read_to_string(&input).unwrap();
    let row = text.lines().nth(1).unwrap().to_string();
    text.push_str(&row);
    text.push('\n');
    std::fs::write(&input, text).unwrap();
    let out = bin(&["build", "--manifest", p(&manifest), "--out", p(&dir.path().join("h.json"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn locate_distress_and_uncovered_points() {
    let dir = tempfile::tempdir().unwrap();
    let (doc, _) = build_document(&config(&scenario(dir.path()), 0.4)).unwrap();
    let report = locate_point(&doc, &[0.05, -0.2, -0.04, 0.9, 0.8], "failed:proportion", "z_score:mean").unwrap();
    assert!(report.is_covered());
    let nearest = &report.balls[0];
    assert!(nearest.mean_z.unwrap() < 1.8);
    assert!(nearest.failure_proportion.unwrap() > 0.0);
    for pair in report.balls.windows(2) {
        assert!(pair[0].distance <= pair[1].distance);
    }
    for n in &nearest.safer_neighbors {
        assert!(n.failure_proportion < nearest.failure_proportion.unwrap());
    }

    assert!(locate_point(&doc, &[1.0, 2.0], "failed:proportion", "z_score:mean").is_err());

    // stored bounds clamp a far-off firm into the sample range
    let far = [5.0, 5.0, 5.0, 50.0, 50.0];
    assert!(locate_point(&doc, &far, "failed:proportion", "z_score:mean").unwrap().is_covered());
    // without them it lies outside every ball
    let mut cfg = config(&scenario(dir.path()), 0.4);
    cfg.ingest.no_winsorize = true;
    let (raw, _) = build_document(&cfg).unwrap();
    let report = locate_point(&raw, &far, "failed:proportion", "z_score:mean").unwrap();
    assert!(!report.is_covered());
    assert!(report.to_text().contains("uncovered"));
}

#[test]
fn locate_cli_reports_firm() {
    let dir = tempfile::tempdir().unwrap();
    let input = scenario(dir.path());
    let graph = dir.path().join("g.json");
    assert!(bin(&["build", "--input", p(&input), "--epsilon", "0.4", "--out", p(&graph)]).status.success());
    let firm = dir.path().join("firm.json");
    std::fs::write(
        &firm,
        r#"{"act":400,"lct":100,"at":1000,"re":300,"ni":100,"xint":10,"txt":10,"csho":60,"prcc_f":50,"tl":500,"sale":3300}"#,
    )
    .unwrap();
    let out = bin(&["locate", p(&graph), "--firm", p(&firm), "--json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["zone"], "safe");
    assert!(v["balls"].as_array().unwrap().iter().all(|b| b["failure_proportion"] == 0.0));

    std::fs::write(&firm, r#"{"act":1,"lct":1,"at":0,"re":1,"ni":1,"xint":0,"txt":0,"csho":1,"prcc_f":1,"tl":1,"sale":1}"#).unwrap();
    assert_eq!(bin(&["locate", p(&graph), "--firm", p(&firm)]).status.code(), Some(2));
}

#[test]
fn stats_all_failed_sample() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(
        &spec,
        r#"{"clusters":[{"center":[0.1,0.0,0.0,1.0,1.0],"spread":[0.1,0.1,0.1,0.1,0.1],"count":50,"failure_probability":1.0}],"years":[2014,2015]}"#,
    )
    .unwrap();
    let csv = dir.path().join("all.csv");
    assert!(bin(&["synth", "--spec", p(&spec), "--seed", "4", "--raw-fields", "--out", p(&csv)]).status.success());
    let out = bin(&["stats", "--input", p(&csv), "--format", "json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for y in v["years"].as_array().unwrap() {
        assert_eq!(y["failure_pct"], 100.0);
    }
    // a constant failure flag has no defined correlation
    let text = String::from_utf8(bin(&["stats", "--input", p(&csv)]).stdout).unwrap();
    assert!(text.contains("undefined"));
}

#[test]
fn generic_mode_and_render_formats() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("generic.csv");
    let mut text = String::from("u,v,w\n");
    for i in 0..60 {
        let t = i as f64 / 10.0;
        text.push_str(&format!("{},{},{}\n", t.cos(), t.sin(), i % 2));
    }
    std::fs::write(&input, text).unwrap();
    let mut cfg = config(&input, 0.25);
    cfg.ingest.mode = InputMode::Generic;
    cfg.ingest.axes = vec!["u".into(), "v".into()];
    cfg.ingest.outcomes = vec!["w".into()];
    cfg.colorations = ballmapper_cli::config::color_selections(&["w".into()], &["mean".into()]).unwrap();
    let (doc, _) = build_document(&cfg).unwrap();
    assert!(doc.colorations.contains_key("w:mean"));
    assert!(!doc.colorations.contains_key("z_score:mean"));

    let opts = |format| RenderOptions {
        format,
        seed: 1,
        iterations: 50,
        legend: true,
        color_by: Some("w:mean".into()),
        label_max: 200,
    };
    let svg = render_document(&doc, &opts(OutputFormat::Svg)).unwrap();
    assert_eq!(svg.matches("<line ").count(), doc.edges.len());
    let dot = render_document(&doc, &opts(OutputFormat::Dot)).unwrap();
    assert_eq!(dot.matches(" -- ").count(), doc.edges.len());
    let xml = render_document(&doc, &opts(OutputFormat::Graphml)).unwrap();
    assert_eq!(xml.matches("<edge ").count(), doc.edges.len());
    let mut missing = opts(OutputFormat::Svg);
    missing.color_by = Some("nope".into());
    assert!(render_document(&doc, &missing).is_err());
}

#[test]
fn color_command_requires_matching_cloud() {
    let dir = tempfile::tempdir().unwrap();
    let input = scenario(dir.path());
    let graph = dir.path().join("g.json");
    assert!(bin(&["build", "--input", p(&input), "--epsilon", "0.4", "--out", p(&graph)]).status.success());
    let manifest = dir.path().join("g.json.manifest.json");
    let out = bin(&["color", p(&graph), "--manifest", p(&manifest), "--color-by", "x4", "--aggregate", "max"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = GraphDocument::from_json(&std::fs::read_to_string(&graph).unwrap()).unwrap();
    assert!(doc.colorations.contains_key("x4:max"));

    let out = bin(&["color", p(&graph), "--input", p(&input), "--no-normalize", "--color-by", "x4"]);
    assert_eq!(out.status.code(), Some(2));
}
