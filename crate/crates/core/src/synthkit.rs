//! Synthetic test collections with controllable group quality, prevalence
//! and manual/automatic mix.
//!
//! Per topic every corpus document is relevant with probability
//! `prevalence` (grade 2 with probability 1/4, else 1). A `hard_fraction` of
//! the relevant documents carry no signal for automatic runs; manual runs see
//! them like any other relevant document, which is their recall bonus. Each
//! run scores every document as `signal + noise / quality`, where quality is
//! drawn per group as `exp(quality_spread · z)`, and keeps its top
//! [`MAX_RUN_DEPTH`]. Noise is half shared within a group, half per run.
//!
//! The official qrels judge the pool of every run at `pool_depth`, so the
//! full-collection configuration reproduces them exactly.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{domain, stream};
use crate::types::{
    CollectionMeta, DocId, GroupManifest, Qrels, Run, RunEntry, RunKind, TopicId, MAX_RUN_DEPTH,
};

/// Largest corpus the generator accepts.
pub const MAX_SYNTH_CORPUS: u64 = 50_000_000;
/// Probability that a relevant document has grade 2.
pub const HIGH_GRADE_PROBABILITY: f64 = 0.25;
const GROUP_NOISE_SHARE: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSpec {
    pub name: String,
    pub n_groups: usize,
    pub runs_per_group: usize,
    pub manual_fraction: f64,
    pub n_topics: usize,
    pub corpus_size: u64,
    /// Expected proportion of relevant documents per topic.
    pub prevalence: f64,
    /// Spread of log group quality; 0 makes all runs exchangeable.
    pub quality_spread: f64,
    /// Share of relevant documents only manual runs can find.
    pub hard_fraction: f64,
    /// Depth of the pool the official qrels are built from.
    pub pool_depth: usize,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            name: "synth".into(),
            n_groups: 10,
            runs_per_group: 3,
            manual_fraction: 0.2,
            n_topics: 50,
            corpus_size: 10_000,
            prevalence: 0.02,
            quality_spread: 0.5,
            hard_fraction: 0.3,
            pool_depth: 100,
            seed: 0,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSynthSpec(m));
        if self.name.is_empty() || self.name.chars().any(char::is_whitespace) {
            return bad(format!("name {:?} must be a non-empty token", self.name));
        }
        for (field, v) in [
            ("n_groups", self.n_groups as u64),
            ("runs_per_group", self.runs_per_group as u64),
            ("n_topics", self.n_topics as u64),
            ("corpus_size", self.corpus_size),
            ("pool_depth", self.pool_depth as u64),
        ] {
            if v < 1 {
                return bad(format!("{field} must be >= 1"));
            }
        }
        if self.corpus_size > MAX_SYNTH_CORPUS {
            return bad(format!("corpus_size must be <= {MAX_SYNTH_CORPUS}"));
        }
        for (field, v) in [
            ("manual_fraction", self.manual_fraction),
            ("prevalence", self.prevalence),
            ("hard_fraction", self.hard_fraction),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{field} must lie in [0, 1], got {v}"));
            }
        }
        if !(self.quality_spread.is_finite() && self.quality_spread >= 0.0) {
            return bad(format!(
                "quality_spread must be finite and >= 0, got {}",
                self.quality_spread
            ));
        }
        if self.prevalence * (self.corpus_size as f64) < 1.0 {
            return bad(format!(
                "prevalence × corpus_size = {} expects less than one relevant document per topic",
                self.prevalence * self.corpus_size as f64
            ));
        }
        Ok(())
    }

    pub fn run_count(&self) -> usize {
        self.n_groups * self.runs_per_group
    }

    pub fn manual_count(&self) -> usize {
        libm::round(self.manual_fraction * self.run_count() as f64) as usize
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthCollection {
    pub runs: Vec<Run>,
    /// Pool of all runs at the spec's pool depth, judged against the truth.
    pub qrels: Qrels,
    pub manifest: GroupManifest,
    pub meta: CollectionMeta,
    /// Every relevant document of the corpus, judged or not.
    pub truth: Qrels,
    /// Quality draw per group, in group order.
    pub group_quality: BTreeMap<String, f64>,
}

fn width(n: u64, min: usize) -> usize {
    let mut digits = 1;
    let mut v = n;
    while v >= 10 {
        v /= 10;
        digits += 1;
    }
    digits.max(min)
}

fn label(prefix: &str, index: u64, w: usize) -> String {
    format!("{prefix}{index:0w$}")
}

fn normal(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Builds a collection from `spec`; identical specs give identical output.
pub fn generate(spec: &SynthSpec) -> Result<SynthCollection> {
    spec.validate()?;
    let seed = spec.seed;
    let corpus = spec.corpus_size as usize;
    let doc_w = width(spec.corpus_size, 6);
    let topic_w = width(spec.n_topics as u64, 3);
    let group_w = width(spec.n_groups as u64, 2);
    let doc_id = |i: usize| DocId::new(label("d", i as u64 + 1, doc_w)).expect("valid token");
    let topics: Vec<TopicId> = (1..=spec.n_topics as u64)
        .map(|t| TopicId::new(label("t", t, topic_w)).expect("valid token"))
        .collect();
    let groups: Vec<String> = (1..=spec.n_groups)
        .map(|g| format!("g{g:0group_w$}"))
        .collect();

    let mut quality_rng = stream(seed, &[domain::SYNTH, 0]);
    let quality: Vec<f64> = groups
        .iter()
        .map(|_| libm::exp(spec.quality_spread * normal(&mut quality_rng)))
        .collect();

    let n_runs = spec.run_count();
    let mut manual = vec![false; n_runs];
    let mut manual_rng = stream(seed, &[domain::SYNTH, 1]);
    for r in rand::seq::index::sample(&mut manual_rng, n_runs, spec.manual_count()) {
        manual[r] = true;
    }
    let run_group = |r: usize| r / spec.runs_per_group;
    let tags: Vec<String> = (0..n_runs)
        .map(|r| format!("{}r{}", groups[run_group(r)], r % spec.runs_per_group + 1))
        .collect();

    let mut truth = Qrels::new(format!("{}-truth", spec.name));
    let mut qrels = Qrels::new(spec.name.clone());
    let mut entries: Vec<Vec<RunEntry>> = vec![Vec::new(); n_runs];
    let keep = MAX_RUN_DEPTH.min(corpus);
    let share = libm::sqrt(GROUP_NOISE_SHARE);
    let own = libm::sqrt(1.0 - GROUP_NOISE_SHARE);

    for (ti, topic) in topics.iter().enumerate() {
        let t = ti as u64;
        // 0: non-relevant, 1/2: grade; `hard` marks signal-free relevant docs.
        let mut grade = vec![0i32; corpus];
        let mut hard = vec![false; corpus];
        let mut rel_rng = stream(seed, &[domain::SYNTH, 2, t]);
        for d in 0..corpus {
            if rel_rng.random_bool(spec.prevalence) {
                grade[d] = if rel_rng.random_bool(HIGH_GRADE_PROBABILITY) {
                    2
                } else {
                    1
                };
                hard[d] = rel_rng.random_bool(spec.hard_fraction);
                truth.insert(topic.clone(), doc_id(d), grade[d])?;
            }
        }

        let mut pooled = BTreeSet::new();
        let mut group_noise = vec![0.0; corpus];
        for (g, &q) in quality.iter().enumerate() {
            let mut g_rng = stream(seed, &[domain::SYNTH, 3, t, g as u64]);
            group_noise.iter_mut().for_each(|x| *x = normal(&mut g_rng));
            for r in g * spec.runs_per_group..(g + 1) * spec.runs_per_group {
                let mut r_rng = stream(seed, &[domain::SYNTH, 4, t, r as u64]);
                let mut scored: Vec<(f64, usize)> = (0..corpus)
                    .map(|d| {
                        let signal = if grade[d] > 0 && (manual[r] || !hard[d]) {
                            1.0
                        } else {
                            0.0
                        };
                        let noise = share * group_noise[d] + own * normal(&mut r_rng);
                        (signal + noise / q, d)
                    })
                    .collect();
                let order =
                    |a: &(f64, usize), b: &(f64, usize)| b.0.total_cmp(&a.0).then(b.1.cmp(&a.1));
                if keep < corpus {
                    scored.select_nth_unstable_by(keep - 1, order);
                    scored.truncate(keep);
                }
                scored.sort_by(order);
                for (rank, &(score, d)) in scored.iter().enumerate() {
                    if rank < spec.pool_depth {
                        pooled.insert(d);
                    }
                    entries[r].push(RunEntry {
                        topic: topic.clone(),
                        doc: doc_id(d),
                        declared_rank: rank as u64 + 1,
                        score,
                        run_tag: tags[r].clone(),
                    });
                }
            }
        }
        for d in pooled {
            qrels.insert(topic.clone(), doc_id(d), grade[d])?;
        }
    }

    let mut manifest = GroupManifest::new();
    let mut runs = Vec::with_capacity(n_runs);
    for (r, run_entries) in entries.into_iter().enumerate() {
        let kind = if manual[r] {
            RunKind::Manual
        } else {
            RunKind::Automatic
        };
        let group = &groups[run_group(r)];
        manifest.insert(tags[r].clone(), group.clone(), kind)?;
        runs.push(Run::from_entries(
            tags[r].clone(),
            group.clone(),
            kind,
            run_entries,
        )?);
    }
    let meta = CollectionMeta::new(
        spec.name.clone(),
        spec.corpus_size,
        spec.pool_depth,
        topics.into_iter().collect(),
    )?;
    Ok(SynthCollection {
        runs,
        qrels,
        manifest,
        meta,
        truth,
        group_quality: groups.into_iter().zip(quality).collect(),
    })
}

/// `n_runs` single-topic runs where run `k` (tags `r1`, `r2`, ...) places the
/// only relevant document at rank `k`, so its AP is exactly `1/k`. Every
/// retrieved document is judged.
pub fn known_ranking_fixture(n_runs: usize) -> Result<(Vec<Run>, Qrels)> {
    if n_runs < 2 {
        return Err(Error::InvalidSynthSpec(format!(
            "fixture needs at least 2 runs, got {n_runs}"
        )));
    }
    let w = width(n_runs as u64, 6);
    let topic = TopicId::new("t001")?;
    let doc = |i: usize| DocId::new(label("d", i as u64, w)).expect("valid token");
    let mut qrels = Qrels::new("fixture");
    for i in 1..=n_runs {
        qrels.insert(topic.clone(), doc(i), i32::from(i == 1))?;
    }
    let runs = (1..=n_runs)
        .map(|k| {
            // Relevant d1 at rank k; non-relevant d2..dn fill the other ranks.
            let mut order: Vec<usize> = (2..=n_runs).collect();
            order.insert(k - 1, 1);
            let entries = order.iter().enumerate().map(|(rank, &d)| RunEntry {
                topic: topic.clone(),
                doc: doc(d),
                declared_rank: rank as u64 + 1,
                score: (n_runs - rank) as f64,
                run_tag: format!("r{k}"),
            });
            Run::from_entries(
                format!("r{k}"),
                format!("g{k}"),
                RunKind::Automatic,
                entries,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((runs, qrels))
}
