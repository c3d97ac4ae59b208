//! Pooling, evaluation and reusability analysis for IR test collections.
//!
//! Everything here is `no_std` + `alloc`: file formats, the CLI and
//! parallel execution live in the `poolforge` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
mod linalg;
pub mod metrics;
pub mod pooling;
pub mod predictor;
pub mod rankcorr;
pub mod rng;
pub mod simulator;
pub mod synthkit;
pub mod types;

pub use error::{Error, Result};
pub use metrics::{evaluate_runs, Leaderboard, MetricId};
pub use pooling::{build_pool, construct_qrels, pool_stats, Pool, PoolStats};
pub use types::{
    CollectionMeta, DocId, GroupManifest, ManifestEntry, Qrels, Ranked, Run, RunEntry, RunKind,
    TopicId,
};
