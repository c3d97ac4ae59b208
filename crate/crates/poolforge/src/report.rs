//! CSV and JSON reports. Floats carry six decimals so reruns diff cleanly.

use std::fmt::Write as _;

use poolforge_core::predictor::{FeatureRow, LotoReport};
use poolforge_core::simulator::{LearningCurve, TrialRecord};
use poolforge_core::{CollectionMeta, Leaderboard};
use serde::Serialize;
use serde_json::{json, Value};

/// Six decimals, ties to even on the exact binary value; never `-0.000000`.
pub fn fmt6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// The value [`fmt6`] prints, as a JSON number.
pub fn json6(x: f64) -> Value {
    let rounded: f64 = fmt6(x).parse().expect("formatted float parses");
    json!(rounded)
}

fn opt6(x: Option<f64>) -> Value {
    x.map_or(Value::Null, json6)
}

pub fn leaderboard_csv(board: &Leaderboard) -> String {
    let mut out = String::from("rank,run_tag,score\n");
    for (i, tag) in board.ranking.iter().enumerate() {
        writeln!(out, "{},{},{}", i + 1, tag, fmt6(board.scores[tag])).unwrap();
    }
    out
}

/// `{ "tag": score, ... }`.
pub fn leaderboard_json(board: &Leaderboard) -> Value {
    Value::Object(
        board
            .scores
            .iter()
            .map(|(t, s)| (t.clone(), json6(*s)))
            .collect(),
    )
}

pub const TRIALS_HEADER: &str =
    "group_count,sample,topic_size,depth,metric,include_manual,tau,tau_ap,max_drop,unique_relevant";

pub fn trials_csv(records: &[TrialRecord]) -> String {
    let mut out = format!("{TRIALS_HEADER}\n");
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.group_count,
            r.sample_index,
            r.topic_size,
            r.depth,
            r.metric,
            r.include_manual,
            fmt6(r.tau),
            fmt6(r.tau_ap),
            r.max_drop,
            r.unique_relevant
        )
        .unwrap();
    }
    out
}

/// File name of one curve's CSV, unique per curve key.
pub fn curve_file_name(curve: &LearningCurve) -> String {
    let k = &curve.key;
    let runs = if k.include_manual { "all" } else { "auto" };
    format!(
        "curve_{}_m{}_p{}_{}.csv",
        k.metric, k.topic_size, k.depth, runs
    )
}

pub fn curve_csv(curve: &LearningCurve) -> String {
    let mut out = String::from("group_count,mean_tau_ap,mean_max_drop,mean_unique_relevant\n");
    for p in &curve.points {
        writeln!(
            out,
            "{},{},{},{}",
            p.group_count,
            fmt6(p.mean_tau_ap),
            fmt6(p.mean_max_drop),
            fmt6(p.mean_unique_relevant)
        )
        .unwrap();
    }
    out
}

/// AUC and Pearson per curve key; undefined values are `null`.
pub fn summary_json(collection: &str, curves: &[LearningCurve], excluded_trials: usize) -> Value {
    let entries: Vec<Value> = curves
        .iter()
        .map(|c| {
            json!({
                "metric": c.key.metric,
                "topic_size": c.key.topic_size,
                "depth": c.key.depth,
                "include_manual": c.key.include_manual,
                "file": curve_file_name(c),
                "group_counts": c.points.iter().map(|p| p.group_count).collect::<Vec<_>>(),
                "auc_tau_ap": opt6(c.auc_tau_ap),
                "auc_max_drop": opt6(c.auc_max_drop),
                "pearson_tau_ap": opt6(c.pearson_tau_ap),
                "pearson_max_drop": opt6(c.pearson_max_drop),
            })
        })
        .collect();
    json!({
        "collection": collection,
        "trials_with_excluded_topics": excluded_trials,
        "curves": entries,
    })
}

pub const FEATURE_HEADER: &str = "collection,groups,topics,depth,corpus_size,tau_ap";

pub fn feature_rows_csv(rows: &[FeatureRow]) -> String {
    let mut out = format!("{FEATURE_HEADER}\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.collection,
            r.groups,
            r.topics,
            r.depth,
            r.corpus_size,
            fmt6(r.target_tau_ap)
        )
        .unwrap();
    }
    out
}

/// One predictor training row per point of every MAP curve.
pub fn feature_rows(meta: &CollectionMeta, curves: &[LearningCurve]) -> Vec<FeatureRow> {
    curves
        .iter()
        .filter(|c| c.key.metric == poolforge_core::MetricId::Map1000)
        .flat_map(|c| {
            c.points.iter().map(move |p| FeatureRow {
                collection: meta.name.clone(),
                groups: p.group_count as u64,
                topics: c.key.topic_size as u64,
                depth: c.key.depth as u64,
                corpus_size: meta.collection_size,
                target_tau_ap: p.mean_tau_ap.clamp(-1.0, 1.0),
            })
        })
        .collect()
}

pub fn loto_csv(report: &LotoReport) -> String {
    let mut out = String::from("held_out,shares_corpus,mse\n");
    for r in &report.rows {
        writeln!(
            out,
            "{},{},{}",
            r.held_out,
            r.shares_corpus_with_training,
            fmt6(r.mse)
        )
        .unwrap();
    }
    out
}

/// Pool statistics file written by `pool`.
#[derive(Debug, Serialize)]
pub struct PoolReport {
    pub qrels: String,
    pub depth: usize,
    pub topics: usize,
    pub groups: Vec<String>,
    pub runs: usize,
    pub pool_size: usize,
    pub judged_count: usize,
    pub relevant_count: usize,
    pub unique_relevant: usize,
    pub percent_relevant: Value,
}
