use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid {kind} token {value:?}: must be non-empty and contain no whitespace")]
    InvalidToken { kind: &'static str, value: String },

    #[error("run {tag:?}: score for ({topic}, {doc}) is not finite")]
    NonFiniteScore {
        tag: String,
        topic: String,
        doc: String,
    },

    #[error("run {tag:?}: duplicate entry for ({topic}, {doc})")]
    DuplicateRunEntry {
        tag: String,
        topic: String,
        doc: String,
    },

    #[error("run {expected:?}: entry carries a different run tag {found:?}")]
    MixedRunTags { expected: String, found: String },

    #[error("duplicate judgment for ({topic}, {doc})")]
    DuplicateJudgment { topic: String, doc: String },

    #[error("run tag {0:?} appears more than once in the manifest")]
    DuplicateManifestEntry(String),

    #[error("run tag {0:?} is not listed in the group manifest")]
    UnknownRunTag(String),

    #[error("manifest lists no groups")]
    EmptyManifest,

    #[error("invalid collection metadata: {0}")]
    InvalidMeta(String),

    #[error("topic set is empty")]
    EmptyTopicSet,

    #[error("pool depth must be at least 1")]
    InvalidDepth,

    #[error("run tag {0:?} occurs more than once")]
    DuplicateRunTag(String),

    #[error("no runs supplied")]
    NoRuns,

    #[error("empty effective topic set: no topic has a relevant document in qrels {0:?}")]
    EmptyEffectiveTopicSet(String),

    #[error("rankings need at least 2 items, got {0}")]
    TooFewItems(usize),

    #[error("rankings are not permutations of the same item set: {0}")]
    NotPermutation(String),

    #[error("undefined correlation: {0} has zero variance")]
    UndefinedCorrelation(&'static str),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("curve x-values must be strictly increasing (offending value {0})")]
    NonIncreasingAxis(usize),

    #[error("group count {requested} outside [1, {available}]")]
    GroupCountOutOfRange { requested: usize, available: usize },

    #[error("topic sample size {requested} outside [1, {available}]")]
    TopicSampleOutOfRange { requested: usize, available: usize },

    #[error("invalid topic strata: {0}")]
    InvalidStrata(String),

    #[error("no automatic runs remain after removing manual runs")]
    NoAutomaticRuns,

    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),

    #[error("trial records incomplete: {0}")]
    MissingCell(String),

    #[error("need at least {required} rows to fit, got {got}")]
    TooFewRows { required: usize, got: usize },

    #[error("design matrix is rank deficient; collinear features: {}", .0.join(", "))]
    RankDeficient(Vec<&'static str>),

    #[error("need at least 2 collections, got {0}")]
    TooFewCollections(usize),

    #[error("collection {0:?} has no rows")]
    EmptyCollection(String),

    #[error("row labelled {found:?} filed under collection {expected:?}")]
    MislabelledRow { expected: String, found: String },

    #[error("invalid feature row: {0}")]
    InvalidFeatureRow(String),

    #[error("invalid synthetic spec: {0}")]
    InvalidSynthSpec(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
