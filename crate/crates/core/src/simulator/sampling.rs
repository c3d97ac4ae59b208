use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::TopicId;

/// Uniform sample of `g` groups without replacement.
pub fn sample_groups<R: Rng + ?Sized>(
    all_groups: &[String],
    g: usize,
    rng: &mut R,
) -> Result<BTreeSet<String>> {
    if g < 1 || g > all_groups.len() {
        return Err(Error::GroupCountOutOfRange {
            requested: g,
            available: all_groups.len(),
        });
    }
    Ok(index::sample(rng, all_groups.len(), g)
        .into_iter()
        .map(|i| all_groups[i].clone())
        .collect())
}

/// A uniformly random ordering of `all_groups`; prefixes form nested samples.
pub fn group_permutation<R: Rng + ?Sized>(all_groups: &[String], rng: &mut R) -> Vec<String> {
    index::sample(rng, all_groups.len(), all_groups.len())
        .into_iter()
        .map(|i| all_groups[i].clone())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub label: String,
    pub topics: BTreeSet<TopicId>,
}

/// Disjoint labelled topic subsets, e.g. the per-year topic ranges of a
/// collection assembled from several tracks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Stratum>", into = "Vec<Stratum>")]
pub struct TopicStrata {
    strata: Vec<Stratum>,
}

impl TopicStrata {
    pub fn new(strata: Vec<Stratum>) -> Result<Self> {
        if strata.is_empty() {
            return Err(Error::InvalidStrata("no strata".into()));
        }
        let mut seen: BTreeSet<&TopicId> = BTreeSet::new();
        for stratum in &strata {
            if stratum.topics.is_empty() {
                return Err(Error::InvalidStrata(format!(
                    "stratum {:?} is empty",
                    stratum.label
                )));
            }
            for topic in &stratum.topics {
                if !seen.insert(topic) {
                    return Err(Error::InvalidStrata(format!(
                        "topic {topic} appears in more than one stratum"
                    )));
                }
            }
        }
        Ok(Self { strata })
    }

    /// One stratum holding every topic.
    pub fn single(label: impl Into<String>, topics: BTreeSet<TopicId>) -> Result<Self> {
        Self::new(alloc::vec![Stratum {
            label: label.into(),
            topics,
        }])
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn total(&self) -> usize {
        self.strata.iter().map(|s| s.topics.len()).sum()
    }

    pub fn all_topics(&self) -> BTreeSet<TopicId> {
        self.strata
            .iter()
            .flat_map(|s| s.topics.iter().cloned())
            .collect()
    }

    /// Checks that the strata partition exactly `topics`.
    pub fn check_covers(&self, topics: &BTreeSet<TopicId>) -> Result<()> {
        let union = self.all_topics();
        if let Some(extra) = union.difference(topics).next() {
            return Err(Error::InvalidStrata(format!(
                "topic {extra} is not in the collection"
            )));
        }
        if let Some(missing) = topics.difference(&union).next() {
            return Err(Error::InvalidStrata(format!(
                "topic {missing} belongs to no stratum"
            )));
        }
        Ok(())
    }
}

impl TryFrom<Vec<Stratum>> for TopicStrata {
    type Error = Error;
    fn try_from(strata: Vec<Stratum>) -> Result<Self> {
        Self::new(strata)
    }
}

impl From<TopicStrata> for Vec<Stratum> {
    fn from(value: TopicStrata) -> Self {
        value.strata
    }
}

/// Proportional allocation of `m` draws over strata of the given sizes,
/// rounded by largest remainder with ties going to the earlier stratum.
pub fn stratum_quotas(sizes: &[usize], m: usize) -> Vec<usize> {
    let total: usize = sizes.iter().sum();
    if total == 0 {
        return alloc::vec![0; sizes.len()];
    }
    let mut quotas: Vec<usize> = sizes.iter().map(|&n| m * n / total).collect();
    let assigned: usize = quotas.iter().sum();
    // Remainders compared exactly as numerators over the common denominator.
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = (m * sizes[a]) % total;
        let rb = (m * sizes[b]) % total;
        rb.cmp(&ra).then(a.cmp(&b))
    });
    for &i in order.iter().take(m - assigned) {
        quotas[i] += 1;
    }
    quotas
}

/// Draws `m` topics, allocating draws to strata in proportion to their size.
pub fn stratified_sample_topics<R: Rng + ?Sized>(
    strata: &TopicStrata,
    m: usize,
    rng: &mut R,
) -> Result<BTreeSet<TopicId>> {
    let total = strata.total();
    if m < 1 || m > total {
        return Err(Error::TopicSampleOutOfRange {
            requested: m,
            available: total,
        });
    }
    let sizes: Vec<usize> = strata.strata.iter().map(|s| s.topics.len()).collect();
    let quotas = stratum_quotas(&sizes, m);
    let mut picked = BTreeSet::new();
    for (stratum, quota) in strata.strata.iter().zip(quotas) {
        let topics: Vec<&TopicId> = stratum.topics.iter().collect();
        for i in index::sample(rng, topics.len(), quota) {
            picked.insert(topics[i].clone());
        }
    }
    Ok(picked)
}
