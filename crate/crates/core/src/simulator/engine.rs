//! Integer-indexed view of a collection for fast repeated pooling and
//! evaluation. Documents are interned per topic; judgments become dense
//! per-topic grade vectors.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::metrics::{
    average_precision_of_grades, ideal_grades, ndcg_of_grades, Leaderboard, MetricId, AP_CUTOFF,
    NDCG_CUTOFF,
};
use crate::types::{Qrels, Run, TopicId};

pub(crate) struct EngineRun {
    pub tag: String,
    pub group: usize,
    /// Interned documents per topic index, in canonical rank order.
    pub docs: Vec<Vec<u32>>,
}

pub(crate) struct Engine {
    pub topics: Vec<TopicId>,
    pub groups: Vec<String>,
    pub runs: Vec<EngineRun>,
    /// Official grade of every interned document, per topic.
    official: Vec<Vec<Option<i32>>>,
    /// Officially judged documents, per topic.
    judged: Vec<Vec<u32>>,
    qrels_name: String,
}

/// Which judgments an evaluation sees.
#[derive(Clone, Copy)]
pub(crate) enum View<'a> {
    Official,
    /// Official judgments restricted to a per-topic membership mask.
    Pooled(&'a [Vec<bool>]),
}

pub(crate) struct PoolMask {
    pub mask: Vec<Vec<bool>>,
    pub relevant: usize,
}

impl Engine {
    /// `runs` must have distinct tags; topics outside `topics` are ignored.
    pub fn build<'a>(
        runs: impl IntoIterator<Item = &'a Run>,
        official: &Qrels,
        topics: impl IntoIterator<Item = &'a TopicId>,
    ) -> Self {
        let topics: Vec<TopicId> = topics.into_iter().cloned().collect();
        let mut runs: Vec<&Run> = runs.into_iter().collect();
        runs.sort_by(|a, b| a.tag().cmp(b.tag()));
        let mut groups: Vec<String> = runs.iter().map(|r| r.group().to_string()).collect();
        groups.sort();
        groups.dedup();

        let mut official_grades = Vec::with_capacity(topics.len());
        let mut judged = Vec::with_capacity(topics.len());
        let mut run_docs: Vec<Vec<Vec<u32>>> = vec![Vec::with_capacity(topics.len()); runs.len()];
        for topic in &topics {
            let mut intern: BTreeMap<&str, u32> = BTreeMap::new();
            let mut grades: Vec<Option<i32>> = Vec::new();
            let mut judged_here = Vec::new();
            if let Some(j) = official.topic(topic) {
                for (doc, &grade) in j {
                    let id = grades.len() as u32;
                    intern.insert(doc.as_str(), id);
                    grades.push(Some(grade));
                    judged_here.push(id);
                }
            }
            for (ri, run) in runs.iter().enumerate() {
                let docs = run
                    .docs(topic)
                    .map(|doc| {
                        *intern.entry(doc.as_str()).or_insert_with(|| {
                            grades.push(None);
                            (grades.len() - 1) as u32
                        })
                    })
                    .collect();
                run_docs[ri].push(docs);
            }
            official_grades.push(grades);
            judged.push(judged_here);
        }
        let engine_runs = runs
            .iter()
            .zip(run_docs)
            .map(|(run, docs)| EngineRun {
                tag: run.tag().to_string(),
                group: groups
                    .binary_search_by(|g| g.as_str().cmp(run.group()))
                    .expect("group listed"),
                docs,
            })
            .collect();
        Self {
            topics,
            groups,
            runs: engine_runs,
            official: official_grades,
            judged,
            qrels_name: official.name().to_string(),
        }
    }

    fn grade(&self, view: View<'_>, topic: usize, doc: u32) -> Option<i32> {
        match view {
            View::Official => self.official[topic][doc as usize],
            View::Pooled(mask) => {
                if mask[topic].get(doc as usize).copied().unwrap_or(false) {
                    self.official[topic][doc as usize]
                } else {
                    None
                }
            }
        }
    }

    /// Pool of the given runs at `depth` over `topics`, with the count of
    /// officially relevant documents it captures.
    pub fn pool(&self, runs: &[usize], topics: &[usize], depth: usize) -> PoolMask {
        let mut mask = vec![Vec::new(); self.topics.len()];
        let mut relevant = 0;
        for &t in topics {
            let mut members = vec![false; self.official[t].len()];
            for &r in runs {
                for &d in self.runs[r].docs[t].iter().take(depth) {
                    let slot = &mut members[d as usize];
                    if !*slot {
                        *slot = true;
                        if self.official[t][d as usize].is_some_and(|g| g > 0) {
                            relevant += 1;
                        }
                    }
                }
            }
            mask[t] = members;
        }
        PoolMask { mask, relevant }
    }

    /// Leaderboard of every run over `topics` under `view`, matching
    /// [`crate::metrics::evaluate_runs`] on the equivalent qrels.
    pub fn evaluate(
        &self,
        topics: &[usize],
        view: View<'_>,
        metric: MetricId,
    ) -> Result<Leaderboard> {
        let mut effective: Vec<(usize, usize, Vec<i32>)> = Vec::new();
        let mut excluded = 0;
        for &t in topics {
            let grades = self.judged[t]
                .iter()
                .filter_map(|&d| self.grade(view, t, d));
            let (relevant, ideal) = match metric {
                MetricId::Map1000 => (grades.filter(|&g| g > 0).count(), Vec::new()),
                MetricId::Ndcg10 => {
                    let ideal = ideal_grades(grades, NDCG_CUTOFF);
                    (ideal.len(), ideal)
                }
            };
            if relevant == 0 {
                excluded += 1;
            } else {
                effective.push((t, relevant, ideal));
            }
        }
        if effective.is_empty() {
            return Err(Error::EmptyEffectiveTopicSet(self.qrels_name.clone()));
        }
        let scores = self
            .runs
            .iter()
            .map(|run| {
                let mut total = 0.0;
                for (t, relevant, ideal) in &effective {
                    let grades = run.docs[*t].iter().map(|&d| self.grade(view, *t, d));
                    let score = match metric {
                        MetricId::Map1000 => {
                            average_precision_of_grades(grades, *relevant, AP_CUTOFF)
                        }
                        MetricId::Ndcg10 => ndcg_of_grades(grades, ideal, NDCG_CUTOFF),
                    };
                    total += score.unwrap_or(0.0);
                }
                (run.tag.clone(), total / effective.len() as f64)
            })
            .collect();
        Ok(Leaderboard::from_scores(
            metric,
            self.qrels_name.clone(),
            scores,
            excluded,
        ))
    }

    /// Leaderboard used when a pooled qrels holds no relevant document at
    /// all: every run scores 0 and the tag order decides.
    pub fn all_zero(&self, metric: MetricId, excluded: usize) -> Leaderboard {
        let scores = self.runs.iter().map(|r| (r.tag.clone(), 0.0)).collect();
        Leaderboard::from_scores(metric, self.qrels_name.clone(), scores, excluded)
    }
}
