use std::path::Path;
use std::process::{Command, Output};

use mpdhp::cli::{grid_preset, manifest_path};
use mpdhp::prior::PriorKind;
use mpdhp::synth::Manifest;

fn mpdhp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpdhp"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_defaults_and_inspect() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.jsonl");
    let o = mpdhp(&["generate", "--out", s(&data)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let manifest: Manifest =
        serde_json::from_str(&std::fs::read_to_string(manifest_path(&data)).unwrap()).unwrap();
    assert_eq!(manifest.n_events, 5000);
    assert_eq!((manifest.spec.n_clusters, manifest.spec.vocab_size), (2, 1000));
    let lines = std::fs::read_to_string(&data).unwrap();
    assert_eq!(lines.lines().count(), 5001);

    let o = mpdhp(&["inspect", s(&data)]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("5000 events, V=1000, K=2"), "{}", stdout(&o));
}

#[test]
fn generate_meets_temporal_target() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.jsonl");
    let o = mpdhp(&[
        "generate", "--out", s(&data), "--temporal-overlap", "0.9", "--k", "4", "--n-events", "300",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let m: Manifest = serde_json::from_str(&std::fs::read_to_string(manifest_path(&data)).unwrap()).unwrap();
    assert!((m.achieved_temporal_overlap - 0.9).abs() <= 0.05, "{}", m.achieved_temporal_overlap);
}

#[test]
fn generate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    for p in [&a, &b] {
        assert!(mpdhp(&["generate", "--out", s(p), "--n-events", "300", "--seed", "12"]).status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(
        std::fs::read(manifest_path(&a)).unwrap(),
        std::fs::read(manifest_path(&b)).unwrap()
    );
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("gen.conf");
    std::fs::write(&cfg, "# small run\nn_events = 150\nk = 3\n").unwrap();
    let data = dir.path().join("d.jsonl");
    let o = mpdhp(&["generate", "--out", s(&data), "--config", s(&cfg), "--k", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let m: Manifest = serde_json::from_str(&std::fs::read_to_string(manifest_path(&data)).unwrap()).unwrap();
    assert_eq!((m.n_events, m.spec.n_clusters), (150, 2));

    std::fs::write(&cfg, "n_event = 150\n").unwrap();
    let o = mpdhp(&["generate", "--out", s(&data), "--config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("n_event"));
}

#[test]
fn fit_round_trip_scores_well_on_separated_text() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.jsonl");
    let out = dir.path().join("fit");
    assert!(mpdhp(&["generate", "--out", s(&data), "--n-events", "1000", "--seed", "2"]).status.success());
    let o = mpdhp(&["fit", s(&data), "--out", s(&out), "--eval", "--seed", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let score: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("NMI "))
        .expect("NMI printed")
        .trim()
        .parse()
        .unwrap();
    assert!(score >= 0.9, "{text}");
    for f in ["assignments.jsonl", "report.json", "tensor.json", "network.json", "top_words.csv"] {
        assert!(out.join(f).exists(), "{f} missing");
    }
    let network: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("network.json")).unwrap()).unwrap();
    assert_eq!(network["lags"], serde_json::json!([0.0, 2.0, 4.0, 6.0, 8.0]));
    let o = mpdhp(&["inspect", s(&out)]);
    assert!(stdout(&o).contains("clusters opened"), "{}", stdout(&o));
}

#[test]
fn dp_and_up_disagree() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.jsonl");
    assert!(mpdhp(&[
        "generate", "--out", s(&data), "--n-events", "400", "--textual-overlap", "0.6", "--seed", "3"
    ])
    .status
    .success());
    let mut files = Vec::new();
    for prior in ["dp", "up"] {
        let out = dir.path().join(prior);
        let o = mpdhp(&["fit", s(&data), "--out", s(&out), "--prior", prior, "--seed", "1"]);
        assert!(o.status.success(), "{}", stderr(&o));
        files.push(std::fs::read(out.join("assignments.jsonl")).unwrap());
    }
    assert_ne!(files[0], files[1]);
}

#[test]
fn data_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("bad.jsonl");
    let out = dir.path().join("fit");
    std::fs::write(&data, "{\"vocab_size\": 4}\n{\"ts\": 1, \"tokens\": [0]}\n{\"ts\": 2, \"tokens\": [4]}\n").unwrap();
    let o = mpdhp(&["fit", s(&data), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    std::fs::write(&data, "{\"vocab_size\": 4}\n{\"ts\": 1, \"tokens\": [0]\n").unwrap();
    let o = mpdhp(&["fit", s(&data), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(mpdhp(&["fit"]).status.code(), Some(1));
    assert_eq!(mpdhp(&["frobnicate"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.jsonl");
    let o = mpdhp(&["generate", "--out", s(&out), "--textual-overlap", "1.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(mpdhp(&["--help"]).status.success());
}

#[test]
fn inspect_rejects_empty_and_unknown_files() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("e.jsonl");
    std::fs::write(&empty, "").unwrap();
    let o = mpdhp(&["inspect", s(&empty)]);
    assert_eq!(o.status.code(), Some(2));
    let other = dir.path().join("o.json");
    std::fs::write(&other, "{\"hello\": 1}").unwrap();
    assert_eq!(mpdhp(&["inspect", s(&other)]).status.code(), Some(2));
}

#[test]
fn single_cell_grid_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("g.toml");
    std::fs::write(&spec, "n_events = 200\nn_samples = [100]\nreplications = 2\nseed = 3\n").unwrap();
    let mut tables = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let o = mpdhp(&["grid", "--spec", s(&spec), "--out", s(&out), "--svg"]);
        assert!(o.status.success(), "{}", stderr(&o));
        let agg = std::fs::read_to_string(out.join("aggregate.csv")).unwrap();
        assert_eq!(agg.lines().count(), 2, "{agg}");
        let runs = std::fs::read_to_string(out.join("runs.csv")).unwrap();
        assert_eq!(runs.lines().count(), 3);
        assert!(std::fs::read_dir(&out).unwrap().any(|e| e.unwrap().path().extension().is_some_and(|x| x == "svg")));
        tables.push((agg, runs));
    }
    assert_eq!(tables[0], tables[1]);
}

#[test]
fn bad_grid_spec_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("g.toml");
    std::fs::write(&spec, "replications = 2\npriors = [\"nope\"]\n").unwrap();
    let o = mpdhp(&["grid", "--spec", s(&spec), "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn fig2_preset_axes() {
    let g = grid_preset("fig2-desk").unwrap();
    assert_eq!(g.priors, PriorKind::ALL.to_vec());
    assert_eq!(g.textual_overlap, vec![0.0, 0.2, 0.4, 0.6, 0.8, 1.0]);
    assert_eq!((g.k.clone(), g.n_events), (vec![2], 2000));
}
