//! Domain types shared by every module: identifiers, runs, judgments,
//! group membership and collection metadata.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Runs are truncated to this many documents per topic, the MAP@1000 cutoff.
pub const MAX_RUN_DEPTH: usize = 1000;

fn valid_token(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(char::is_whitespace)
}

macro_rules! token_type {
    ($(#[$meta:meta])* $name:ident, $kind:literal) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(try_from = "String", into = "String")]
        pub struct $name(String);

        impl $name {
            pub fn new(value: impl Into<String>) -> Result<Self> {
                let value = value.into();
                if valid_token(&value) {
                    Ok(Self(value))
                } else {
                    Err(Error::InvalidToken { kind: $kind, value })
                }
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl TryFrom<String> for $name {
            type Error = Error;
            fn try_from(value: String) -> Result<Self> {
                Self::new(value)
            }
        }

        impl TryFrom<&str> for $name {
            type Error = Error;
            fn try_from(value: &str) -> Result<Self> {
                Self::new(value)
            }
        }

        impl From<$name> for String {
            fn from(value: $name) -> String {
                value.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl core::borrow::Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

token_type!(
    /// Opaque topic identifier, compared by exact string equality.
    TopicId,
    "topic"
);
token_type!(
    /// Opaque document identifier.
    DocId,
    "document"
);

/// Whether humans intervened in producing a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunKind {
    Manual,
    Automatic,
}

impl RunKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RunKind::Manual => "manual",
            RunKind::Automatic => "automatic",
        }
    }
}

impl fmt::Display for RunKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for RunKind {
    type Err = String;

    fn from_str(s: &str) -> core::result::Result<Self, String> {
        match s {
            "manual" => Ok(RunKind::Manual),
            "automatic" => Ok(RunKind::Automatic),
            other => Err(alloc::format!(
                "unknown run kind {other:?} (expected manual or automatic)"
            )),
        }
    }
}

/// One line of a run file.
#[derive(Clone, Debug, PartialEq)]
pub struct RunEntry {
    pub topic: TopicId,
    pub doc: DocId,
    /// Kept for completeness; ordering never uses it.
    pub declared_rank: u64,
    pub score: f64,
    pub run_tag: String,
}

/// A retrieved document with its system score.
#[derive(Clone, Debug, PartialEq)]
pub struct Ranked {
    pub doc: DocId,
    pub score: f64,
}

/// Canonical order: score descending, then document id descending.
pub fn canonical_order(a: &Ranked, b: &Ranked) -> Ordering {
    b.score.total_cmp(&a.score).then_with(|| b.doc.cmp(&a.doc))
}

/// One system's ranked lists, tagged with its group and kind.
#[derive(Clone, Debug, PartialEq)]
pub struct Run {
    tag: String,
    group: String,
    kind: RunKind,
    rankings: BTreeMap<TopicId, Vec<Ranked>>,
}

impl Run {
    /// Builds a run from raw entries: groups by topic, sorts canonically
    /// and truncates each topic to [`MAX_RUN_DEPTH`].
    pub fn from_entries(
        tag: impl Into<String>,
        group: impl Into<String>,
        kind: RunKind,
        entries: impl IntoIterator<Item = RunEntry>,
    ) -> Result<Self> {
        let tag = tag.into();
        let group = group.into();
        if !valid_token(&tag) {
            return Err(Error::InvalidToken {
                kind: "run tag",
                value: tag,
            });
        }
        if !valid_token(&group) {
            return Err(Error::InvalidToken {
                kind: "group",
                value: group,
            });
        }
        let mut rankings: BTreeMap<TopicId, Vec<Ranked>> = BTreeMap::new();
        let mut seen: BTreeSet<(TopicId, DocId)> = BTreeSet::new();
        for entry in entries {
            if entry.run_tag != tag {
                return Err(Error::MixedRunTags {
                    expected: tag,
                    found: entry.run_tag,
                });
            }
            if !entry.score.is_finite() {
                return Err(Error::NonFiniteScore {
                    tag,
                    topic: entry.topic.to_string(),
                    doc: entry.doc.to_string(),
                });
            }
            if !seen.insert((entry.topic.clone(), entry.doc.clone())) {
                return Err(Error::DuplicateRunEntry {
                    tag,
                    topic: entry.topic.to_string(),
                    doc: entry.doc.to_string(),
                });
            }
            rankings.entry(entry.topic).or_default().push(Ranked {
                doc: entry.doc,
                score: entry.score,
            });
        }
        for list in rankings.values_mut() {
            list.sort_by(canonical_order);
            list.truncate(MAX_RUN_DEPTH);
        }
        Ok(Self {
            tag,
            group,
            kind,
            rankings,
        })
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn group(&self) -> &str {
        &self.group
    }

    pub fn kind(&self) -> RunKind {
        self.kind
    }

    pub fn rankings(&self) -> &BTreeMap<TopicId, Vec<Ranked>> {
        &self.rankings
    }

    /// The ranked list for `topic`; empty when the run did not answer it.
    pub fn ranking(&self, topic: &TopicId) -> &[Ranked] {
        self.rankings.get(topic).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn docs<'a>(&'a self, topic: &TopicId) -> impl Iterator<Item = &'a DocId> + 'a {
        self.ranking(topic).iter().map(|r| &r.doc)
    }

    pub fn topics(&self) -> impl Iterator<Item = &TopicId> {
        self.rankings.keys()
    }
}

/// Graded relevance judgments keyed by (topic, document).
///
/// A document is relevant iff its grade is positive. Negative grades are kept
/// as judged-but-non-relevant.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Qrels {
    name: String,
    grades: BTreeMap<TopicId, BTreeMap<DocId, i32>>,
}

impl Qrels {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            grades: BTreeMap::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    /// Adds a judgment; a second judgment for the same pair is an error.
    pub fn insert(&mut self, topic: TopicId, doc: DocId, grade: i32) -> Result<()> {
        if self.grade(&topic, &doc).is_some() {
            return Err(Error::DuplicateJudgment {
                topic: topic.to_string(),
                doc: doc.to_string(),
            });
        }
        self.grades.entry(topic).or_default().insert(doc, grade);
        Ok(())
    }

    pub fn grade(&self, topic: &TopicId, doc: &DocId) -> Option<i32> {
        self.grades.get(topic)?.get(doc).copied()
    }

    pub fn is_relevant(&self, topic: &TopicId, doc: &DocId) -> bool {
        self.grade(topic, doc).is_some_and(|g| g > 0)
    }

    /// Judgments for one topic, if any exist.
    pub fn topic(&self, topic: &TopicId) -> Option<&BTreeMap<DocId, i32>> {
        self.grades.get(topic)
    }

    pub fn topics(&self) -> impl Iterator<Item = &TopicId> {
        self.grades.keys()
    }

    pub fn relevant_count(&self, topic: &TopicId) -> usize {
        self.topic(topic)
            .map_or(0, |judged| judged.values().filter(|&&g| g > 0).count())
    }

    pub fn len(&self) -> usize {
        self.grades.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All judgments in (topic, document) order.
    pub fn iter(&self) -> impl Iterator<Item = (&TopicId, &DocId, i32)> {
        self.grades
            .iter()
            .flat_map(|(t, judged)| judged.iter().map(move |(d, &g)| (t, d, g)))
    }

    /// A copy holding only the judgments for `topics`.
    pub fn restrict_topics(&self, topics: &BTreeSet<TopicId>) -> Qrels {
        Qrels {
            name: self.name.clone(),
            grades: self
                .grades
                .iter()
                .filter(|(t, _)| topics.contains(*t))
                .map(|(t, j)| (t.clone(), j.clone()))
                .collect(),
        }
    }
}

/// Group membership and run kind of one run tag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub group: String,
    pub kind: RunKind,
}

/// Maps run tags to their group and manual/automatic kind.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupManifest {
    entries: BTreeMap<String, ManifestEntry>,
}

impl GroupManifest {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(
        &mut self,
        tag: impl Into<String>,
        group: impl Into<String>,
        kind: RunKind,
    ) -> Result<()> {
        let tag = tag.into();
        let group = group.into();
        for (k, v) in [("run tag", &tag), ("group", &group)] {
            if !valid_token(v) {
                return Err(Error::InvalidToken {
                    kind: k,
                    value: v.clone(),
                });
            }
        }
        if self.entries.contains_key(&tag) {
            return Err(Error::DuplicateManifestEntry(tag));
        }
        self.entries.insert(tag, ManifestEntry { group, kind });
        Ok(())
    }

    pub fn resolve(&self, tag: &str) -> Result<&ManifestEntry> {
        self.entries
            .get(tag)
            .ok_or_else(|| Error::UnknownRunTag(tag.to_string()))
    }

    pub fn entries(&self) -> &BTreeMap<String, ManifestEntry> {
        &self.entries
    }

    pub fn groups(&self) -> BTreeSet<&str> {
        self.entries.values().map(|e| e.group.as_str()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Rejects a manifest without any group.
    pub fn validate(&self) -> Result<()> {
        if self.entries.is_empty() {
            Err(Error::EmptyManifest)
        } else {
            Ok(())
        }
    }
}

/// Descriptive statistics of a test collection that feed the predictor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectionMeta {
    pub name: String,
    /// Number of documents in the corpus.
    pub collection_size: u64,
    pub official_pool_depth: usize,
    pub topics: BTreeSet<TopicId>,
}

impl CollectionMeta {
    pub fn new(
        name: impl Into<String>,
        collection_size: u64,
        official_pool_depth: usize,
        topics: BTreeSet<TopicId>,
    ) -> Result<Self> {
        let meta = Self {
            name: name.into(),
            collection_size,
            official_pool_depth,
            topics,
        };
        meta.validate()?;
        Ok(meta)
    }

    pub fn validate(&self) -> Result<()> {
        if self.collection_size < 1 {
            return Err(Error::InvalidMeta("collection_size must be >= 1".into()));
        }
        if self.official_pool_depth < 1 {
            return Err(Error::InvalidMeta(
                "official_pool_depth must be >= 1".into(),
            ));
        }
        if self.topics.is_empty() {
            return Err(Error::InvalidMeta("topic set is empty".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn entry(topic: &str, doc: &str, score: f64) -> RunEntry {
        RunEntry {
            topic: TopicId::new(topic).unwrap(),
            doc: DocId::new(doc).unwrap(),
            declared_rank: 0,
            score,
            run_tag: "tag7".into(),
        }
    }

    fn order(run: &Run, topic: &str) -> Vec<String> {
        run.docs(&TopicId::new(topic).unwrap())
            .map(|d| d.to_string())
            .collect()
    }

    #[test]
    fn tokens_reject_whitespace_and_empty() {
        assert!(TopicId::new("301").is_ok());
        assert!(TopicId::new("").is_err());
        assert!(DocId::new("a b").is_err());
        assert!(DocId::new("a\tb").is_err());
    }

    #[test]
    fn sorts_by_score_descending() {
        let run = Run::from_entries(
            "tag7",
            "g",
            RunKind::Automatic,
            vec![entry("301", "dA", 2.0), entry("301", "dB", 5.0)],
        )
        .unwrap();
        assert_eq!(order(&run, "301"), ["dB", "dA"]);
    }

    #[test]
    fn equal_scores_break_by_doc_descending() {
        let run = Run::from_entries(
            "tag7",
            "g",
            RunKind::Automatic,
            vec![entry("301", "dA", 1.0), entry("301", "dZ", 1.0)],
        )
        .unwrap();
        assert_eq!(order(&run, "301"), ["dZ", "dA"]);
    }

    #[test]
    fn truncates_to_max_depth() {
        let entries = (0..1500).map(|i| entry("1", &alloc::format!("d{i:05}"), i as f64));
        let run = Run::from_entries("tag7", "g", RunKind::Manual, entries).unwrap();
        let list = run.ranking(&TopicId::new("1").unwrap());
        assert_eq!(list.len(), MAX_RUN_DEPTH);
        assert_eq!(list[0].doc.as_str(), "d01499");
    }

    #[test]
    fn rejects_non_finite_duplicate_and_mixed() {
        let nan = Run::from_entries(
            "tag7",
            "g",
            RunKind::Manual,
            vec![entry("1", "d", f64::NAN)],
        );
        assert!(matches!(nan, Err(Error::NonFiniteScore { .. })));
        let dup = Run::from_entries(
            "tag7",
            "g",
            RunKind::Manual,
            vec![entry("1", "d", 1.0), entry("1", "d", 2.0)],
        );
        assert!(matches!(dup, Err(Error::DuplicateRunEntry { .. })));
        let mixed = Run::from_entries("other", "g", RunKind::Manual, vec![entry("1", "d", 1.0)]);
        assert!(matches!(mixed, Err(Error::MixedRunTags { .. })));
    }

    #[test]
    fn qrels_duplicate_is_error() {
        let mut q = Qrels::new("q");
        let t = TopicId::new("301").unwrap();
        let d = DocId::new("dA").unwrap();
        q.insert(t.clone(), d.clone(), 1).unwrap();
        assert_eq!(q.grade(&t, &d), Some(1));
        let err = q.insert(t, d, 0).unwrap_err();
        assert_eq!(
            err,
            Error::DuplicateJudgment {
                topic: "301".into(),
                doc: "dA".into()
            }
        );
    }

    #[test]
    fn negative_grades_are_not_relevant() {
        let mut q = Qrels::new("q");
        let t = TopicId::new("1").unwrap();
        q.insert(t.clone(), DocId::new("a").unwrap(), -2).unwrap();
        q.insert(t.clone(), DocId::new("b").unwrap(), 2).unwrap();
        assert!(!q.is_relevant(&t, &DocId::new("a").unwrap()));
        assert_eq!(q.relevant_count(&t), 1);
        assert_eq!(q.len(), 2);
    }

    #[test]
    fn manifest_rules() {
        let mut m = GroupManifest::new();
        assert_eq!(m.validate(), Err(Error::EmptyManifest));
        m.insert("r1", "uta", RunKind::Automatic).unwrap();
        assert_eq!(
            m.insert("r1", "x", RunKind::Manual),
            Err(Error::DuplicateManifestEntry("r1".into()))
        );
        assert_eq!(m.resolve("r1").unwrap().group, "uta");
        assert!(m.resolve("r2").is_err());
        assert!("handmade".parse::<RunKind>().is_err());
    }

    #[test]
    fn meta_validation() {
        let topics: BTreeSet<TopicId> = [TopicId::new("1").unwrap()].into_iter().collect();
        assert!(CollectionMeta::new("c", 0, 100, topics.clone()).is_err());
        assert!(CollectionMeta::new("c", 10, 0, topics.clone()).is_err());
        assert!(CollectionMeta::new("c", 10, 100, BTreeSet::new()).is_err());
        assert!(CollectionMeta::new("c", 10, 100, topics).is_ok());
    }
}
