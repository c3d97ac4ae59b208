//! Reusability simulation: sample participating groups, rebuild the pool
//! from their runs only, re-evaluate every run and measure how far the
//! resulting leaderboard strays from the reference one.
//!
//! Trials are independent. [`Experiment::trial_keys`] lists them in canonical
//! order and [`Experiment::run_trial`] executes one, so callers may schedule
//! them on any number of threads and still obtain identical records.

mod curves;
mod engine;
mod sampling;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{Leaderboard, MetricId};
use crate::rankcorr::{agreement, RankingPair};
use crate::rng::{self, domain};
use crate::types::{CollectionMeta, Qrels, Run, RunKind};

pub use curves::{aggregate_curves, CurveKey, CurvePoint, LearningCurve};
pub use sampling::{
    group_permutation, sample_groups, stratified_sample_topics, stratum_quotas, Stratum,
    TopicStrata,
};

use engine::{Engine, View};

/// When topic samples are redrawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopicSampling {
    /// One sample per (topic size, sample index), shared by every group count.
    #[default]
    PerSample,
    /// A fresh sample for every (topic size, group count, sample index).
    PerGroupCount,
}

/// How group subsets are drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupSampling {
    /// Independent uniform draw for every trial.
    #[default]
    Independent,
    /// Prefixes of one random group ordering per (topic size, sample index),
    /// so larger group counts always contain smaller ones.
    Nested,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Group samples per group count.
    pub n_samples: usize,
    /// Empty means every count from 1 to the number of groups.
    pub group_counts: Vec<usize>,
    /// Empty means all topics.
    pub topic_sample_sizes: Vec<usize>,
    /// Empty means the collection's official depth.
    pub pool_depths: Vec<usize>,
    pub metrics: Vec<MetricId>,
    pub include_manual: bool,
    pub seed: u64,
    pub topic_sampling: TopicSampling,
    pub group_sampling: GroupSampling,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_samples: 4,
            group_counts: Vec::new(),
            topic_sample_sizes: Vec::new(),
            pool_depths: Vec::new(),
            metrics: MetricId::ALL.to_vec(),
            include_manual: true,
            seed: 0,
            topic_sampling: TopicSampling::PerSample,
            group_sampling: GroupSampling::Independent,
        }
    }
}

/// Coordinates of one trial; the derived order is the canonical record order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TrialKey {
    pub topic_size: usize,
    pub depth: usize,
    pub metric: MetricId,
    pub group_count: usize,
    /// 1-based.
    pub sample_index: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub group_count: usize,
    pub sample_index: usize,
    pub sampled_groups: Vec<String>,
    pub topic_size: usize,
    pub depth: usize,
    pub metric: MetricId,
    pub include_manual: bool,
    pub tau: f64,
    pub tau_ap: f64,
    pub max_drop: usize,
    pub unique_relevant: usize,
    /// Sampled topics without relevant documents under the simulated qrels.
    pub excluded_topics: usize,
}

impl TrialRecord {
    pub fn key(&self) -> TrialKey {
        TrialKey {
            topic_size: self.topic_size,
            depth: self.depth,
            metric: self.metric,
            group_count: self.group_count,
            sample_index: self.sample_index,
        }
    }
}

/// Keeps every run, or only automatic ones. Groups left without runs simply
/// disappear from the sampling universe.
pub fn filter_runs(runs: &[Run], include_manual: bool) -> Vec<&Run> {
    runs.iter()
        .filter(|r| include_manual || r.kind() == RunKind::Automatic)
        .collect()
}

struct TopicSample {
    topics: Vec<usize>,
    references: BTreeMap<MetricId, Leaderboard>,
}

/// A validated experiment ready to execute trials.
pub struct Experiment {
    config: ExperimentConfig,
    engine: Engine,
    group_counts: Vec<usize>,
    topic_sizes: Vec<usize>,
    depths: Vec<usize>,
    metrics: Vec<MetricId>,
    /// Keyed by (topic size, sample index, group count or 0).
    samples: BTreeMap<(usize, usize, usize), TopicSample>,
}

fn normalise(values: &[usize], default: impl FnOnce() -> Vec<usize>) -> Vec<usize> {
    let mut v = if values.is_empty() {
        default()
    } else {
        values.to_vec()
    };
    v.sort_unstable();
    v.dedup();
    v
}

impl Experiment {
    pub fn prepare(
        config: &ExperimentConfig,
        runs: &[Run],
        official: &Qrels,
        meta: &CollectionMeta,
        strata: &TopicStrata,
    ) -> Result<Self> {
        meta.validate()?;
        strata.check_covers(&meta.topics)?;
        if config.n_samples < 1 {
            return Err(Error::InvalidConfig("n_samples must be >= 1".into()));
        }
        if official.is_empty() {
            return Err(Error::InvalidConfig("official qrels are empty".into()));
        }
        let mut tags = BTreeSet::new();
        for run in runs {
            if !tags.insert(run.tag()) {
                return Err(Error::DuplicateRunTag(run.tag().into()));
            }
        }
        let kept = filter_runs(runs, config.include_manual);
        if kept.is_empty() {
            return Err(if config.include_manual || runs.is_empty() {
                Error::NoRuns
            } else {
                Error::NoAutomaticRuns
            });
        }
        if kept.len() < 2 {
            return Err(Error::TooFewItems(kept.len()));
        }
        let engine = Engine::build(kept, official, &meta.topics);
        let n_groups = engine.groups.len();
        let total_topics = engine.topics.len();

        let group_counts = normalise(&config.group_counts, || (1..=n_groups).collect());
        if let Some(&g) = group_counts.iter().find(|&&g| g < 1 || g > n_groups) {
            return Err(Error::GroupCountOutOfRange {
                requested: g,
                available: n_groups,
            });
        }
        let topic_sizes = normalise(&config.topic_sample_sizes, || alloc::vec![total_topics]);
        if let Some(&m) = topic_sizes.iter().find(|&&m| m < 1 || m > total_topics) {
            return Err(Error::TopicSampleOutOfRange {
                requested: m,
                available: total_topics,
            });
        }
        let depths = normalise(&config.pool_depths, || {
            alloc::vec![meta.official_pool_depth]
        });
        if depths.contains(&0) {
            return Err(Error::InvalidDepth);
        }
        let mut metrics = config.metrics.clone();
        metrics.sort();
        metrics.dedup();
        if metrics.is_empty() {
            return Err(Error::InvalidConfig("metrics must not be empty".into()));
        }

        let index_of: BTreeMap<_, _> = engine
            .topics
            .iter()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        let mut samples = BTreeMap::new();
        let per_g: Vec<usize> = match config.topic_sampling {
            TopicSampling::PerSample => alloc::vec![0],
            TopicSampling::PerGroupCount => group_counts.clone(),
        };
        for &m in &topic_sizes {
            for i in 1..=config.n_samples {
                for &g in &per_g {
                    let mut stream =
                        rng::stream(config.seed, &[domain::TOPICS, m as u64, i as u64, g as u64]);
                    let picked = stratified_sample_topics(strata, m, &mut stream)?;
                    let topics: Vec<usize> = picked.iter().map(|t| index_of[t]).collect();
                    let mut references = BTreeMap::new();
                    for &metric in &metrics {
                        references
                            .insert(metric, engine.evaluate(&topics, View::Official, metric)?);
                    }
                    samples.insert((m, i, g), TopicSample { topics, references });
                }
            }
        }

        Ok(Self {
            config: config.clone(),
            engine,
            group_counts,
            topic_sizes,
            depths,
            metrics,
            samples,
        })
    }

    /// Groups in the sampling universe, sorted.
    pub fn groups(&self) -> &[String] {
        &self.engine.groups
    }

    pub fn run_count(&self) -> usize {
        self.engine.runs.len()
    }

    /// Every trial, in canonical order.
    pub fn trial_keys(&self) -> Vec<TrialKey> {
        let mut keys = Vec::new();
        for &topic_size in &self.topic_sizes {
            for &depth in &self.depths {
                for &metric in &self.metrics {
                    for &group_count in &self.group_counts {
                        for sample_index in 1..=self.config.n_samples {
                            keys.push(TrialKey {
                                topic_size,
                                depth,
                                metric,
                                group_count,
                                sample_index,
                            });
                        }
                    }
                }
            }
        }
        keys
    }

    /// The reference leaderboard a trial is compared against.
    pub fn reference(&self, key: &TrialKey) -> Option<&Leaderboard> {
        self.sample_for(key)?.references.get(&key.metric)
    }

    fn sample_for(&self, key: &TrialKey) -> Option<&TopicSample> {
        let g = match self.config.topic_sampling {
            TopicSampling::PerSample => 0,
            TopicSampling::PerGroupCount => key.group_count,
        };
        self.samples.get(&(key.topic_size, key.sample_index, g))
    }

    fn sampled_groups(&self, key: &TrialKey) -> Result<BTreeSet<String>> {
        let seed = self.config.seed;
        match self.config.group_sampling {
            GroupSampling::Independent => {
                let mut stream = rng::stream(
                    seed,
                    &[
                        domain::GROUPS,
                        key.topic_size as u64,
                        key.depth as u64,
                        key.metric.code(),
                        key.group_count as u64,
                        key.sample_index as u64,
                    ],
                );
                sample_groups(&self.engine.groups, key.group_count, &mut stream)
            }
            GroupSampling::Nested => {
                let mut stream = rng::stream(
                    seed,
                    &[
                        domain::NESTED_GROUPS,
                        key.topic_size as u64,
                        key.sample_index as u64,
                    ],
                );
                if key.group_count < 1 || key.group_count > self.engine.groups.len() {
                    return Err(Error::GroupCountOutOfRange {
                        requested: key.group_count,
                        available: self.engine.groups.len(),
                    });
                }
                let order = group_permutation(&self.engine.groups, &mut stream);
                Ok(order.into_iter().take(key.group_count).collect())
            }
        }
    }

    pub fn run_trial(&self, key: &TrialKey) -> Result<TrialRecord> {
        let sample = self.sample_for(key).ok_or_else(|| {
            Error::InvalidConfig(format!("trial {key:?} is not part of this experiment"))
        })?;
        let reference = sample
            .references
            .get(&key.metric)
            .ok_or_else(|| Error::InvalidConfig(format!("metric {} not configured", key.metric)))?;
        if !self.depths.contains(&key.depth) {
            return Err(Error::InvalidConfig(format!(
                "depth {} not configured",
                key.depth
            )));
        }
        let groups = self.sampled_groups(key)?;
        let contributing: Vec<usize> = self
            .engine
            .runs
            .iter()
            .enumerate()
            .filter(|(_, r)| groups.contains(&self.engine.groups[r.group]))
            .map(|(i, _)| i)
            .collect();
        let pool = self.engine.pool(&contributing, &sample.topics, key.depth);
        let estimate =
            match self
                .engine
                .evaluate(&sample.topics, View::Pooled(&pool.mask), key.metric)
            {
                Ok(lb) => lb,
                Err(Error::EmptyEffectiveTopicSet(_)) => {
                    self.engine.all_zero(key.metric, sample.topics.len())
                }
                Err(e) => return Err(e),
            };
        let pair = RankingPair::new(reference.ranking.clone(), estimate.ranking.clone())?;
        let report = agreement(&pair)?;
        Ok(TrialRecord {
            group_count: key.group_count,
            sample_index: key.sample_index,
            sampled_groups: groups.into_iter().collect(),
            topic_size: key.topic_size,
            depth: key.depth,
            metric: key.metric,
            include_manual: self.config.include_manual,
            tau: report.tau,
            tau_ap: report.tau_ap,
            max_drop: report.max_drop,
            unique_relevant: pool.relevant,
            excluded_topics: estimate.excluded_topics,
        })
    }

    /// Runs every trial sequentially, in canonical order.
    pub fn run(&self) -> Result<Vec<TrialRecord>> {
        self.trial_keys()
            .iter()
            .map(|k| self.run_trial(k))
            .collect()
    }
}

/// Prepares and runs a whole experiment on the current thread.
pub fn run_experiment(
    config: &ExperimentConfig,
    runs: &[Run],
    official: &Qrels,
    meta: &CollectionMeta,
    strata: &TopicStrata,
) -> Result<Vec<TrialRecord>> {
    Experiment::prepare(config, runs, official, meta, strata)?.run()
}
