//! MAP@1000 and NDCG@10 scoring and leaderboards.
//!
//! Scoring is split into grade-sequence kernels (`*_of_grades`) that the
//! simulator's indexed engine shares with the string-keyed API here, so both
//! paths compute identical floating-point results.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{DocId, Qrels, Run, TopicId};

pub const AP_CUTOFF: usize = 1000;
pub const NDCG_CUTOFF: usize = 10;

/// The two ranking metrics runs are compared under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MetricId {
    #[serde(rename = "MAP_1000", alias = "map")]
    Map1000,
    #[serde(rename = "NDCG_10", alias = "ndcg")]
    Ndcg10,
}

impl MetricId {
    pub const ALL: [MetricId; 2] = [MetricId::Map1000, MetricId::Ndcg10];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricId::Map1000 => "MAP_1000",
            MetricId::Ndcg10 => "NDCG_10",
        }
    }

    /// Stable small integer used when deriving random streams.
    pub fn code(self) -> u64 {
        match self {
            MetricId::Map1000 => 0,
            MetricId::Ndcg10 => 1,
        }
    }

    pub fn cutoff(self) -> usize {
        match self {
            MetricId::Map1000 => AP_CUTOFF,
            MetricId::Ndcg10 => NDCG_CUTOFF,
        }
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricId {
    type Err = String;

    fn from_str(s: &str) -> core::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "map" | "map_1000" | "map@1000" => Ok(MetricId::Map1000),
            "ndcg" | "ndcg_10" | "ndcg@10" => Ok(MetricId::Ndcg10),
            _ => Err(alloc::format!(
                "unknown metric {s:?} (expected MAP_1000 or NDCG_10)"
            )),
        }
    }
}

/// Average precision over grades in rank order (`None` = unjudged).
///
/// Returns `None` when `total_relevant` is zero: the topic has nothing to find.
pub fn average_precision_of_grades<I>(
    grades: I,
    total_relevant: usize,
    cutoff: usize,
) -> Option<f64>
where
    I: IntoIterator<Item = Option<i32>>,
{
    if total_relevant == 0 {
        return None;
    }
    let mut found = 0usize;
    let mut sum = 0.0;
    for (i, grade) in grades.into_iter().take(cutoff).enumerate() {
        if grade.is_some_and(|g| g > 0) {
            found += 1;
            sum += found as f64 / (i + 1) as f64;
        }
    }
    Some(sum / total_relevant as f64)
}

fn gain(grade: Option<i32>) -> f64 {
    grade.map_or(0.0, |g| g.max(0) as f64)
}

fn discount(rank: usize) -> f64 {
    libm::log2(rank as f64 + 1.0)
}

/// DCG@k with linear gain and `1/log2(i+1)` discount.
pub fn dcg_of_grades<I>(grades: I, k: usize) -> f64
where
    I: IntoIterator<Item = Option<i32>>,
{
    grades
        .into_iter()
        .take(k)
        .enumerate()
        .map(|(i, g)| gain(g) / discount(i + 1))
        .sum()
}

/// The `k` largest positive grades among `judged`, in descending order.
pub fn ideal_grades<I>(judged: I, k: usize) -> Vec<i32>
where
    I: IntoIterator<Item = i32>,
{
    let mut positive: Vec<i32> = judged.into_iter().filter(|&g| g > 0).collect();
    positive.sort_unstable_by(|a, b| b.cmp(a));
    positive.truncate(k);
    positive
}

/// NDCG@k given the ideal grade list from [`ideal_grades`].
///
/// Returns `None` when the ideal DCG is zero.
pub fn ndcg_of_grades<I>(grades: I, ideal: &[i32], k: usize) -> Option<f64>
where
    I: IntoIterator<Item = Option<i32>>,
{
    let idcg = dcg_of_grades(ideal.iter().map(|&g| Some(g)), k);
    if idcg <= 0.0 {
        return None;
    }
    Some(dcg_of_grades(grades, k) / idcg)
}

/// AP of `ranking` on `topic`; `None` if `q` holds no relevant document for it.
pub fn average_precision(
    ranking: &[DocId],
    q: &Qrels,
    topic: &TopicId,
    cutoff: usize,
) -> Option<f64> {
    average_precision_of_grades(
        ranking.iter().map(|d| q.grade(topic, d)),
        q.relevant_count(topic),
        cutoff,
    )
}

/// NDCG@k of `ranking` on `topic`; `None` if the ideal DCG is zero.
pub fn ndcg_at_k(ranking: &[DocId], q: &Qrels, topic: &TopicId, k: usize) -> Option<f64> {
    let ideal = ideal_grades(
        q.topic(topic).into_iter().flat_map(|j| j.values().copied()),
        k,
    );
    ndcg_of_grades(ranking.iter().map(|d| q.grade(topic, d)), &ideal, k)
}

/// Runs ordered by mean effectiveness under one qrels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Leaderboard {
    pub metric: MetricId,
    pub qrels_name: String,
    pub scores: BTreeMap<String, f64>,
    /// Rank 1 first; ordered by score descending, then run tag ascending.
    pub ranking: Vec<String>,
    /// Qrels topics left out of the mean for lack of relevant documents.
    pub excluded_topics: usize,
}

impl Leaderboard {
    pub fn from_scores(
        metric: MetricId,
        qrels_name: impl Into<String>,
        scores: BTreeMap<String, f64>,
        excluded_topics: usize,
    ) -> Self {
        let mut ranking: Vec<String> = scores.keys().cloned().collect();
        ranking.sort_by(|a, b| scores[b].total_cmp(&scores[a]).then_with(|| a.cmp(b)));
        Self {
            metric,
            qrels_name: qrels_name.into(),
            scores,
            ranking,
            excluded_topics,
        }
    }

    /// 1-based rank of `tag`.
    pub fn rank_of(&self, tag: &str) -> Option<usize> {
        self.ranking.iter().position(|t| t == tag).map(|p| p + 1)
    }
}

/// Mean per-topic score of every run over topics with at least one relevant
/// document in `q`. A run silent on such a topic scores 0 there.
pub fn evaluate_runs<'a, I>(runs: I, q: &Qrels, metric: MetricId) -> Result<Leaderboard>
where
    I: IntoIterator<Item = &'a Run>,
{
    let runs: Vec<&Run> = runs.into_iter().collect();
    if runs.is_empty() {
        return Err(Error::NoRuns);
    }
    let mut effective: Vec<(&TopicId, usize, Vec<i32>)> = Vec::new();
    let mut excluded = 0usize;
    for topic in q.topics() {
        let judged = q.topic(topic).expect("topic listed by qrels");
        let relevant = judged.values().filter(|&&g| g > 0).count();
        if relevant == 0 {
            excluded += 1;
            continue;
        }
        let ideal = ideal_grades(judged.values().copied(), NDCG_CUTOFF);
        effective.push((topic, relevant, ideal));
    }
    if effective.is_empty() {
        return Err(Error::EmptyEffectiveTopicSet(q.name().to_string()));
    }
    let mut scores = BTreeMap::new();
    let mut seen = BTreeSet::new();
    for run in runs {
        if !seen.insert(run.tag()) {
            return Err(Error::DuplicateRunTag(run.tag().to_string()));
        }
        let mut total = 0.0;
        for (topic, relevant, ideal) in &effective {
            let grades = run.docs(topic).map(|d| q.grade(topic, d));
            let score = match metric {
                MetricId::Map1000 => average_precision_of_grades(grades, *relevant, AP_CUTOFF),
                MetricId::Ndcg10 => ndcg_of_grades(grades, ideal, NDCG_CUTOFF),
            };
            total += score.unwrap_or(0.0);
        }
        scores.insert(run.tag().to_string(), total / effective.len() as f64);
    }
    Ok(Leaderboard::from_scores(metric, q.name(), scores, excluded))
}
