//! Depth-k pooling and restriction of official judgments to a pool.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::types::{DocId, Qrels, Run, TopicId};

/// The (topic, document) pairs selected for judging.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pool {
    members: BTreeMap<TopicId, BTreeSet<DocId>>,
    depth: usize,
    topics: BTreeSet<TopicId>,
    contributing_groups: BTreeSet<String>,
}

impl Pool {
    /// Pool members in (topic, document) order.
    pub fn members(&self) -> impl Iterator<Item = (&TopicId, &DocId)> {
        self.members
            .iter()
            .flat_map(|(t, docs)| docs.iter().map(move |d| (t, d)))
    }

    /// Pooled documents of one topic.
    pub fn topic_members(&self, topic: &TopicId) -> Option<&BTreeSet<DocId>> {
        self.members.get(topic)
    }

    pub fn contains(&self, topic: &TopicId, doc: &DocId) -> bool {
        self.members
            .get(topic)
            .is_some_and(|docs| docs.contains(doc))
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn topics(&self) -> &BTreeSet<TopicId> {
        &self.topics
    }

    pub fn contributing_groups(&self) -> &BTreeSet<String> {
        &self.contributing_groups
    }

    pub fn len(&self) -> usize {
        self.members.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Judging statistics of a pooled qrels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PoolStats {
    pub judged_count: usize,
    pub relevant_count: usize,
    pub unique_relevant: usize,
    /// `relevant_count / judged_count`, or 0 when nothing was judged.
    pub percent_relevant: f64,
}

/// Unions the top `depth` documents of every run on every topic in `topics`.
pub fn build_pool<'a, I>(runs: I, topics: &BTreeSet<TopicId>, depth: usize) -> Result<Pool>
where
    I: IntoIterator<Item = &'a Run>,
{
    if depth < 1 {
        return Err(Error::InvalidDepth);
    }
    if topics.is_empty() {
        return Err(Error::EmptyTopicSet);
    }
    let mut members: BTreeMap<TopicId, BTreeSet<DocId>> = BTreeMap::new();
    let mut groups = BTreeSet::new();
    let mut any_run = false;
    for run in runs {
        any_run = true;
        groups.insert(String::from(run.group()));
        for topic in topics {
            let mut docs = run.docs(topic).take(depth).peekable();
            if docs.peek().is_none() {
                continue;
            }
            members
                .entry(topic.clone())
                .or_default()
                .extend(docs.cloned());
        }
    }
    if !any_run {
        return Err(Error::NoRuns);
    }
    Ok(Pool {
        members,
        depth,
        topics: topics.clone(),
        contributing_groups: groups,
    })
}

/// Keeps exactly the official judgments whose pair lies in the pool.
///
/// Pooled pairs that were never officially judged are left out and therefore
/// score as non-relevant.
pub fn construct_qrels(official: &Qrels, pool: &Pool) -> Qrels {
    let mut out = Qrels::new(format!("{}@pool{}", official.name(), pool.depth));
    for (topic, doc) in pool.members() {
        if let Some(grade) = official.grade(topic, doc) {
            out.insert(topic.clone(), doc.clone(), grade)
                .expect("pool members are unique");
        }
    }
    out
}

/// Judged/relevant counts of `q`, counting only pairs inside `pool`.
pub fn pool_stats(q: &Qrels, pool: &Pool) -> PoolStats {
    let mut judged = 0usize;
    let mut relevant = 0usize;
    for (topic, doc, grade) in q.iter() {
        if !pool.contains(topic, doc) {
            continue;
        }
        judged += 1;
        if grade > 0 {
            relevant += 1;
        }
    }
    PoolStats {
        judged_count: judged,
        relevant_count: relevant,
        unique_relevant: relevant,
        percent_relevant: if judged > 0 {
            relevant as f64 / judged as f64
        } else {
            0.0
        },
    }
}
