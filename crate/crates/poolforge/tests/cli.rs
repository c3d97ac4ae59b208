mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use common::{poolforge, s, write_collection};
use poolforge::trec_io;
use poolforge_core::synthkit::known_ranking_fixture;
use poolforge_core::{DocId, TopicId};
use serde_json::Value;

#[test]
fn pool_on_two_run_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let (runs, qrels) = known_ranking_fixture(2).unwrap();
    let f = write_collection(dir.path(), &runs, &qrels, 2, 2);
    let out_qrels = dir.path().join("pooled.txt");
    let stats = dir.path().join("stats.json");
    let o = poolforge(&[
        "pool",
        "--runs",
        s(&f.runs),
        "--manifest",
        s(&f.manifest),
        "--qrels",
        s(&f.qrels),
        "--depth",
        "1",
        "--groups",
        "g1",
        "--out",
        s(&out_qrels),
        "--stats",
        s(&stats),
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let pooled = trec_io::read_qrels(&out_qrels).unwrap();
    let t = TopicId::new("t001").unwrap();
    assert_eq!(pooled.len(), 1);
    assert_eq!(pooled.grade(&t, &DocId::new("d000001").unwrap()), Some(1));
    let stats: Value = serde_json::from_str(&fs::read_to_string(&stats).unwrap()).unwrap();
    assert_eq!(stats["pool_size"], 1);
    assert_eq!(stats["relevant_count"], 1);
    assert_eq!(stats["unique_relevant"], 1);
    assert_eq!(stats["groups"], serde_json::json!(["g1"]));

    // The second run's top document is non-relevant.
    let o = poolforge(&[
        "pool",
        "--runs",
        s(&f.runs),
        "--manifest",
        s(&f.manifest),
        "--qrels",
        s(&f.qrels),
        "--depth",
        "1",
        "--groups",
        "g2",
        "--out",
        s(&out_qrels),
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let stats: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(stats["relevant_count"], 0);
    assert_eq!(stats["percent_relevant"], 0.0);
}

#[test]
fn pool_rejects_unknown_group() {
    let dir = tempfile::tempdir().unwrap();
    let (runs, qrels) = known_ranking_fixture(2).unwrap();
    let f = write_collection(dir.path(), &runs, &qrels, 2, 2);
    let o = poolforge(&[
        "pool",
        "--runs",
        s(&f.runs),
        "--manifest",
        s(&f.manifest),
        "--qrels",
        s(&f.qrels),
        "--depth",
        "1",
        "--groups",
        "g9",
        "--out",
        s(&dir.path().join("x")),
    ]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("--groups"), "{}", o.stderr);
}

#[test]
fn eval_ranks_fixture_by_reciprocal_rank() {
    let dir = tempfile::tempdir().unwrap();
    let (runs, qrels) = known_ranking_fixture(4).unwrap();
    let f = write_collection(dir.path(), &runs, &qrels, 4, 4);
    let o = poolforge(&[
        "eval",
        "--runs",
        s(&f.runs),
        "--manifest",
        s(&f.manifest),
        "--qrels",
        s(&f.qrels),
        "--metric",
        "map",
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(
        o.stdout,
        "rank,run_tag,score\n1,r1,1.000000\n2,r2,0.500000\n3,r3,0.333333\n4,r4,0.250000\n"
    );
}

#[test]
fn missing_inputs_exit_2_and_name_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let (runs, qrels) = known_ranking_fixture(2).unwrap();
    let f = write_collection(dir.path(), &runs, &qrels, 2, 2);
    let missing = dir.path().join("absent.csv");
    let o = poolforge(&[
        "eval",
        "--runs",
        s(&f.runs),
        "--manifest",
        s(&missing),
        "--qrels",
        s(&f.qrels),
    ]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("--manifest"), "{}", o.stderr);

    let o = poolforge(&["pool", "--runs", s(&f.runs)]);
    assert_eq!(o.code, 2);
    let o = poolforge(&["--jobs", "0", "synth", "--out", s(dir.path())]);
    assert_eq!(o.code, 2);
}

#[test]
fn malformed_run_reports_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let (runs, qrels) = known_ranking_fixture(2).unwrap();
    let f = write_collection(dir.path(), &runs, &qrels, 2, 2);
    let bad = f.runs.join("r1.run");
    let mut text = fs::read_to_string(&bad).unwrap();
    text.push_str("t001 Q0 d000009 3 NaN r1\n");
    fs::write(&bad, text).unwrap();
    let o = poolforge(&[
        "eval",
        "--runs",
        s(&f.runs),
        "--manifest",
        s(&f.manifest),
        "--qrels",
        s(&f.qrels),
    ]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("r1.run:3"), "{}", o.stderr);
}

#[test]
fn rankcorr_compares_leaderboards() {
    let dir = tempfile::tempdir().unwrap();
    let reference = dir.path().join("ref.csv");
    let estimate = dir.path().join("est.txt");
    fs::write(
        &reference,
        "rank,run_tag,score\n2,b,0.5\n1,a,0.9\n3,c,0.1\n",
    )
    .unwrap();
    fs::write(&estimate, "a\nc\nb\n").unwrap();
    let o = poolforge(&[
        "rankcorr",
        "--reference",
        s(&reference),
        "--estimate",
        s(&estimate),
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["n"], 3);
    assert_eq!(v["tau"], 0.333333);
    assert_eq!(v["tau_ap"], 0.5);
    assert_eq!(v["max_drop"], 1);

    fs::write(&estimate, "a\nb\n").unwrap();
    let o = poolforge(&[
        "rankcorr",
        "--reference",
        s(&reference),
        "--estimate",
        s(&estimate),
    ]);
    assert_eq!(o.code, 2);
}

fn synth(dir: &Path, extra: &[&str]) {
    let mut args = vec!["synth", "--out", s(dir)];
    args.extend_from_slice(extra);
    let o = poolforge(&args);
    assert_eq!(o.code, 0, "{}", o.stderr);
}

fn read_tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().display().to_string();
                files.insert(rel, fs::read(&p).unwrap());
            }
        }
    }
    files
}

#[test]
fn synth_then_simulate_is_deterministic_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c");
    synth(
        &c,
        &[
            "--groups",
            "5",
            "--runs-per-group",
            "2",
            "--topics",
            "12",
            "--corpus-size",
            "1500",
            "--seed",
            "11",
        ],
    );
    let config = c.join("simulate.json");
    let mut outputs = Vec::new();
    for jobs in ["1", "4"] {
        let out = dir.path().join(format!("out{jobs}"));
        let o = poolforge(&[
            "--jobs",
            jobs,
            "simulate",
            "--config",
            s(&config),
            "--output-dir",
            s(&out),
            "--n-samples",
            "3",
            "--depths",
            "10,50",
            "--topic-sizes",
            "6,12",
        ]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        outputs.push(read_tree(&out));
    }
    assert_eq!(outputs[0], outputs[1]);
    let files = &outputs[0];
    // 2 topic sizes x 2 depths x 2 metrics.
    assert_eq!(files.keys().filter(|k| k.starts_with("curves")).count(), 8);
    let trials = String::from_utf8(files["trials.csv"].clone()).unwrap();
    assert_eq!(trials.lines().count(), 1 + 2 * 2 * 2 * 5 * 3);
    let summary: Value = serde_json::from_slice(&files["summary.json"]).unwrap();
    assert_eq!(summary["experiment"]["seed"], 11);
    assert!(files.contains_key("feature_rows.csv"));
}

#[test]
fn seed_env_matches_seed_flag() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    synth(
        &a,
        &[
            "--groups",
            "3",
            "--topics",
            "4",
            "--corpus-size",
            "300",
            "--seed",
            "5",
        ],
    );
    let status = std::process::Command::new(env!("CARGO_BIN_EXE_poolforge"))
        .args([
            "synth",
            "--out",
            s(&b),
            "--groups",
            "3",
            "--topics",
            "4",
            "--corpus-size",
            "300",
        ])
        .env("POOLFORGE_SEED", "5")
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(read_tree(&a), read_tree(&b));
}

#[test]
fn simulate_config_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c");
    synth(
        &c,
        &["--groups", "3", "--topics", "4", "--corpus-size", "300"],
    );
    let config = c.join("bad.json");
    fs::write(
        &config,
        r#"{"collection": {"runs": "runs", "qrels": "qrels.txt", "manifest": "manifest.csv", "meta": "meta.json"},
            "output_dir": "o", "experiment": {"pool_depths": [10, -1]}}"#,
    )
    .unwrap();
    let o = poolforge(&["simulate", "--config", s(&config)]);
    assert_eq!(o.code, 2);
    assert!(
        o.stderr.contains("experiment.pool_depths[1]"),
        "{}",
        o.stderr
    );
}

#[test]
fn synth_prevalence_holds_on_an_exhaustive_pool() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c");
    synth(
        &c,
        &[
            "--groups",
            "2",
            "--runs-per-group",
            "1",
            "--topics",
            "30",
            "--corpus-size",
            "400",
            "--prevalence",
            "0.4",
            "--pool-depth",
            "400",
            "--seed",
            "2",
        ],
    );
    let qrels = trec_io::read_qrels(&c.join("qrels.txt")).unwrap();
    assert_eq!(qrels.len(), 30 * 400, "pool must judge every document");
    let relevant = qrels.iter().filter(|(_, _, g)| *g > 0).count();
    let share = relevant as f64 / qrels.len() as f64;
    // 12000 Bernoulli(0.4) draws: sd ~ 0.0045.
    assert!((share - 0.4).abs() < 0.02, "share {share}");
}

#[test]
fn predict_fit_apply_and_loto() {
    let dir = tempfile::tempdir().unwrap();
    let law = |g: u64, t: u64, p: u64, c: u64| {
        0.1 + 0.02 * g as f64 + 0.002 * t as f64 + 0.001 * p as f64 + 1e-8 * c as f64
    };
    let mut files = Vec::new();
    for (name, corpus) in [("a", 10_000u64), ("b", 500_000), ("c", 2_000_000)] {
        let mut text = String::from("collection,groups,topics,depth,corpus_size,tau_ap\n");
        for g in [1u64, 4, 9] {
            for t in [25u64, 50] {
                for p in [10u64, 100] {
                    text.push_str(&format!(
                        "{name},{g},{t},{p},{corpus},{}\n",
                        law(g, t, p, corpus)
                    ));
                }
            }
        }
        let path = dir.path().join(format!("{name}.csv"));
        fs::write(&path, text).unwrap();
        files.push(path);
    }
    let model = dir.path().join("model.json");
    let mut args = vec!["predict", "fit", "--out", s(&model), "--rows"];
    args.extend(files.iter().map(|p| s(p)));
    let o = poolforge(&args);
    assert_eq!(o.code, 0, "{}", o.stderr);

    let o = poolforge(&[
        "predict",
        "apply",
        "--model",
        s(&model),
        "--groups",
        "5",
        "--topics",
        "40",
        "--depth",
        "50",
        "--corpus",
        "100000",
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.stdout.trim(), format!("{:.6}", law(5, 40, 50, 100_000)));

    let mut args = vec!["predict", "loto", "--rows"];
    args.extend(files.iter().map(|p| s(p)));
    let o = poolforge(&args);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert_eq!(lines[0], "held_out,shares_corpus,mse");
    assert_eq!(lines[1], "a,false,0.000000");
    assert_eq!(lines.len(), 4);

    let o = poolforge(&["predict", "loto", "--rows", s(&files[0])]);
    assert_eq!(o.code, 2, "{}", o.stdout);
}
