//! `poolforge` subcommands. [`run`] returns the process exit code:
//! 0 success, 1 runtime failure, 2 usage or validation failure.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use poolforge_core::metrics::evaluate_runs;
use poolforge_core::pooling::{build_pool, construct_qrels, pool_stats};
use poolforge_core::predictor::{
    fit_ols, loto, predict, FeatureRow, RegressionModel, MODEL_FORMAT_VERSION,
};
use poolforge_core::rankcorr::{agreement, max_rise, RankingPair};
use poolforge_core::simulator::{aggregate_curves, Experiment, GroupSampling, TopicSampling};
use poolforge_core::synthkit::{generate, SynthSpec};
use poolforge_core::{MetricId, Qrels, Run, RunKind, TopicId};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{CollectionPaths, ReportFormat, SimulateConfig};
use crate::error::{Error, Result};
use crate::report;
use crate::trec_io;

pub const SEED_ENV: &str = "POOLFORGE_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "poolforge",
    version,
    about = "Pooling simulations and reusability analysis for IR test collections"
)]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: Option<u16>,

    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a pool from selected groups and write the qrels it induces.
    Pool(PoolArgs),
    /// Score every run and write the leaderboard.
    Eval(EvalArgs),
    /// Compare two leaderboards with Kendall tau, tau_ap and Max Drop.
    Rankcorr(RankcorrArgs),
    /// Run a group-sampling sweep described by a JSON config.
    Simulate(SimulateArgs),
    /// Fit, apply or cross-validate the reusability regression model.
    Predict {
        #[command(subcommand)]
        command: PredictCommand,
    },
    /// Generate a synthetic collection.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct CollectionArgs {
    /// Directory with one run file per run.
    #[arg(long, value_name = "DIR")]
    pub runs: PathBuf,
    /// CSV `run_tag,group,kind`.
    #[arg(long, value_name = "FILE")]
    pub manifest: PathBuf,
    /// Official qrels.
    #[arg(long, value_name = "FILE")]
    pub qrels: PathBuf,
    /// Collection meta JSON; its topic set overrides the qrels topics.
    #[arg(long, value_name = "FILE")]
    pub meta: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PoolArgs {
    #[command(flatten)]
    pub collection: CollectionArgs,
    #[arg(long)]
    pub depth: usize,
    /// `all` or a comma-separated list of group ids.
    #[arg(long, default_value = "all")]
    pub groups: String,
    /// Leave manual runs out of the pool.
    #[arg(long)]
    pub automatic_only: bool,
    /// Where to write the pooled qrels.
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
    /// Where to write pool statistics (default: standard output).
    #[arg(long, value_name = "FILE")]
    pub stats: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub collection: CollectionArgs,
    #[arg(long, default_value = "MAP_1000", value_parser = parse_metric)]
    pub metric: MetricId,
    /// Leaderboard CSV (default: standard output).
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    /// Leaderboard JSON keyed by run tag.
    #[arg(long, value_name = "FILE")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RankcorrArgs {
    /// Reference leaderboard: CSV `rank,run_tag,score` or one tag per line.
    #[arg(long, value_name = "FILE")]
    pub reference: PathBuf,
    /// Estimated leaderboard, same format.
    #[arg(long, value_name = "FILE")]
    pub estimate: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_name = "FILE")]
    pub config: PathBuf,
    #[arg(long, value_name = "DIR")]
    pub runs: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub qrels: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub manifest: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub meta: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    pub output_dir: Option<PathBuf>,
    #[arg(long, env = SEED_ENV)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub n_samples: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub group_counts: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub topic_sizes: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub depths: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',', value_parser = parse_metric)]
    pub metrics: Option<Vec<MetricId>>,
    #[arg(long)]
    pub include_manual: Option<bool>,
    #[arg(long, value_enum)]
    pub topic_sampling: Option<TopicSamplingArg>,
    #[arg(long, value_enum)]
    pub group_sampling: Option<GroupSamplingArg>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TopicSamplingArg {
    PerSample,
    PerGroupCount,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GroupSamplingArg {
    Independent,
    Nested,
}

#[derive(Debug, Subcommand)]
pub enum PredictCommand {
    /// Fit on feature-row CSVs and write the model JSON.
    Fit {
        #[arg(long, value_name = "FILE", num_args = 1.., required = true)]
        rows: Vec<PathBuf>,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Print the predicted tau_ap for one configuration.
    Apply {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[arg(long)]
        groups: u64,
        #[arg(long)]
        topics: u64,
        #[arg(long)]
        depth: u64,
        #[arg(long)]
        corpus: u64,
    },
    /// Leave-one-collection-out evaluation.
    Loto {
        #[arg(long, value_name = "FILE", num_args = 1.., required = true)]
        rows: Vec<PathBuf>,
        /// CSV `held_out,shares_corpus,mse` (default: standard output).
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Output directory; receives runs/, qrels.txt, truth.txt, manifest.csv,
    /// meta.json and simulate.json.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long)]
    pub groups: Option<usize>,
    #[arg(long)]
    pub runs_per_group: Option<usize>,
    #[arg(long)]
    pub manual_fraction: Option<f64>,
    #[arg(long)]
    pub topics: Option<usize>,
    #[arg(long)]
    pub corpus_size: Option<u64>,
    #[arg(long)]
    pub prevalence: Option<f64>,
    #[arg(long)]
    pub quality_spread: Option<f64>,
    #[arg(long)]
    pub hard_fraction: Option<f64>,
    #[arg(long)]
    pub pool_depth: Option<usize>,
    #[arg(long, env = SEED_ENV)]
    pub seed: Option<u64>,
}

fn parse_metric(s: &str) -> std::result::Result<MetricId, String> {
    s.parse()
}

/// Parses `args` (program name first), runs the command and reports errors
/// on standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .format_timestamp(None)
        .try_init();
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: Cli) -> Result<()> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        builder = builder.num_threads(jobs as usize);
    }
    let pool = builder.build().map_err(|e| Error::Runtime(e.to_string()))?;
    pool.install(|| match cli.command {
        Command::Pool(args) => cmd_pool(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Rankcorr(args) => cmd_rankcorr(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Predict { command } => cmd_predict(command),
        Command::Synth(args) => cmd_synth(args),
    })
}

fn require(path: &Path, flag: &str) -> Result<()> {
    if path.exists() {
        Ok(())
    } else {
        Err(Error::Usage(format!(
            "{flag}: {} does not exist",
            path.display()
        )))
    }
}

struct Collection {
    runs: Vec<Run>,
    qrels: Qrels,
    topics: BTreeSet<TopicId>,
}

fn load_collection(args: &CollectionArgs) -> Result<Collection> {
    require(&args.runs, "--runs")?;
    require(&args.manifest, "--manifest")?;
    require(&args.qrels, "--qrels")?;
    if let Some(meta) = &args.meta {
        require(meta, "--meta")?;
    }
    let manifest = trec_io::read_manifest(&args.manifest)?;
    let runs = trec_io::load_runs_dir(&args.runs, &manifest)?;
    let qrels = trec_io::read_qrels(&args.qrels)?;
    let topics = match &args.meta {
        Some(path) => trec_io::read_meta(path)?.meta.topics,
        None => qrels.topics().cloned().collect(),
    };
    if topics.is_empty() {
        return Err(poolforge_core::Error::EmptyTopicSet.into());
    }
    log::info!(
        "loaded {} runs and {} judgments over {} topics",
        runs.len(),
        qrels.len(),
        topics.len()
    );
    Ok(Collection {
        runs,
        qrels,
        topics,
    })
}

fn cmd_pool(args: PoolArgs) -> Result<()> {
    let c = load_collection(&args.collection)?;
    let known: BTreeSet<&str> = c.runs.iter().map(|r| r.group()).collect();
    let wanted: BTreeSet<&str> = if args.groups == "all" {
        known.clone()
    } else {
        args.groups
            .split(',')
            .map(str::trim)
            .filter(|g| !g.is_empty())
            .collect()
    };
    if let Some(g) = wanted.iter().find(|g| !known.contains(**g)) {
        return Err(Error::Usage(format!(
            "--groups: no run belongs to group {g:?}"
        )));
    }
    let selected: Vec<&Run> = c
        .runs
        .iter()
        .filter(|r| wanted.contains(r.group()))
        .filter(|r| !args.automatic_only || r.kind() == RunKind::Automatic)
        .collect();
    let pool = build_pool(selected.iter().copied(), &c.topics, args.depth)?;
    let qrels = construct_qrels(&c.qrels.restrict_topics(&c.topics), &pool);
    let stats = pool_stats(&qrels, &pool);
    trec_io::write_qrels(&args.out, &qrels)?;
    let out = report::PoolReport {
        qrels: qrels.name().to_string(),
        depth: args.depth,
        topics: c.topics.len(),
        groups: pool.contributing_groups().iter().cloned().collect(),
        runs: selected.len(),
        pool_size: pool.len(),
        judged_count: stats.judged_count,
        relevant_count: stats.relevant_count,
        unique_relevant: stats.unique_relevant,
        percent_relevant: report::json6(stats.percent_relevant),
    };
    match &args.stats {
        Some(path) => trec_io::write_json(path, &out),
        None => {
            println!(
                "{}",
                serde_json::to_string_pretty(&out).expect("serializable")
            );
            Ok(())
        }
    }
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let c = load_collection(&args.collection)?;
    let qrels = c.qrels.restrict_topics(&c.topics);
    let board = evaluate_runs(&c.runs, &qrels, args.metric)?;
    if board.excluded_topics > 0 {
        log::info!(
            "{} topics without relevant documents excluded",
            board.excluded_topics
        );
    }
    if let Some(path) = &args.json {
        trec_io::write_json(path, &report::leaderboard_json(&board))?;
    }
    match &args.csv {
        Some(path) => trec_io::write_text(path, &report::leaderboard_csv(&board))?,
        None if args.json.is_none() => print!("{}", report::leaderboard_csv(&board)),
        None => {}
    }
    Ok(())
}

/// A leaderboard file as an ordered tag list.
pub fn read_ranking(path: &Path) -> Result<Vec<String>> {
    let file = fs::File::open(path).map_err(|e| Error::read(path, e))?;
    let lines: Vec<String> = BufReader::new(file)
        .lines()
        .collect::<std::io::Result<_>>()
        .map_err(|e| Error::read(path, e))?;
    let source = path.display().to_string();
    if lines.first().map(|l| l.trim()) != Some("rank,run_tag,score") {
        return Ok(lines
            .iter()
            .map(|l| l.trim())
            .filter(|l| !l.is_empty())
            .map(String::from)
            .collect());
    }
    let mut ranked = Vec::new();
    for (i, line) in lines.iter().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let rank = match cols.as_slice() {
            [rank, _, _] => rank.parse::<usize>().ok(),
            _ => None,
        }
        .ok_or_else(|| Error::parse(&source, i as u64 + 1, "expected rank,run_tag,score"))?;
        ranked.push((rank, cols[1].to_string()));
    }
    ranked.sort();
    Ok(ranked.into_iter().map(|(_, t)| t).collect())
}

fn cmd_rankcorr(args: RankcorrArgs) -> Result<()> {
    require(&args.reference, "--reference")?;
    require(&args.estimate, "--estimate")?;
    let pair = RankingPair::new(
        read_ranking(&args.reference)?,
        read_ranking(&args.estimate)?,
    )?;
    let report = agreement(&pair)?;
    log::debug!("largest rise: {} places", max_rise(&pair));
    let out = json!({
        "n": pair.len(),
        "tau": report::json6(report.tau),
        "tau_ap": report::json6(report.tau_ap),
        "max_drop": report.max_drop,
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&out).expect("serializable")
    );
    Ok(())
}

fn apply_overrides(config: &mut SimulateConfig, args: &SimulateArgs) {
    let paths = &mut config.collection;
    for (slot, value) in [
        (&mut paths.runs, &args.runs),
        (&mut paths.qrels, &args.qrels),
        (&mut paths.manifest, &args.manifest),
        (&mut paths.meta, &args.meta),
        (&mut config.output_dir, &args.output_dir),
    ] {
        if let Some(v) = value {
            *slot = v.clone();
        }
    }
    let e = &mut config.experiment;
    if let Some(v) = args.seed {
        e.seed = v;
    }
    if let Some(v) = args.n_samples {
        e.n_samples = v;
    }
    if let Some(v) = &args.group_counts {
        e.group_counts = v.clone();
    }
    if let Some(v) = &args.topic_sizes {
        e.topic_sample_sizes = v.clone();
    }
    if let Some(v) = &args.depths {
        e.pool_depths = v.clone();
    }
    if let Some(v) = &args.metrics {
        e.metrics = v.clone();
    }
    if let Some(v) = args.include_manual {
        e.include_manual = v;
    }
    if let Some(v) = args.topic_sampling {
        e.topic_sampling = match v {
            TopicSamplingArg::PerSample => TopicSampling::PerSample,
            TopicSamplingArg::PerGroupCount => TopicSampling::PerGroupCount,
        };
    }
    if let Some(v) = args.group_sampling {
        e.group_sampling = match v {
            GroupSamplingArg::Independent => GroupSampling::Independent,
            GroupSamplingArg::Nested => GroupSampling::Nested,
        };
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    require(&args.config, "--config")?;
    let mut config = SimulateConfig::load(&args.config)?;
    apply_overrides(&mut config, &args);
    let source = args.config.display().to_string();
    config.validate().map_err(|m| Error::parse(&source, 0, m))?;
    let CollectionPaths {
        runs,
        qrels,
        manifest,
        meta,
    } = &config.collection;
    for (path, field) in [
        (runs, "runs"),
        (qrels, "qrels"),
        (manifest, "manifest"),
        (meta, "meta"),
    ] {
        require(path, &format!("collection.{field} (--{field})"))?;
    }
    let manifest = trec_io::read_manifest(manifest)?;
    let runs = trec_io::load_runs_dir(runs, &manifest)?;
    let qrels = trec_io::read_qrels(qrels)?;
    let meta = trec_io::read_meta(meta)?;
    let strata = meta.strata()?;

    let experiment = Experiment::prepare(&config.experiment, &runs, &qrels, &meta.meta, &strata)?;
    let keys = experiment.trial_keys();
    log::info!(
        "{} trials over {} groups and {} runs",
        keys.len(),
        experiment.groups().len(),
        experiment.run_count()
    );
    let records = keys
        .par_iter()
        .map(|k| experiment.run_trial(k))
        .collect::<poolforge_core::Result<Vec<_>>>()
        .map_err(|e| Error::Runtime(e.to_string()))?;
    let excluded = records.iter().filter(|r| r.excluded_topics > 0).count();
    if excluded > 0 {
        log::info!(
            "{excluded} trials evaluated with topics excluded for lack of relevant documents"
        );
    }
    let curves = aggregate_curves(&records).map_err(|e| Error::Runtime(e.to_string()))?;

    let out = &config.output_dir;
    if config.wants(ReportFormat::Csv) {
        trec_io::write_text(&out.join("trials.csv"), &report::trials_csv(&records))?;
        for curve in &curves {
            trec_io::write_text(
                &out.join("curves").join(report::curve_file_name(curve)),
                &report::curve_csv(curve),
            )?;
        }
        let rows = report::feature_rows(&meta.meta, &curves);
        trec_io::write_text(
            &out.join("feature_rows.csv"),
            &report::feature_rows_csv(&rows),
        )?;
    }
    if config.wants(ReportFormat::Json) {
        let mut summary = report::summary_json(&meta.meta.name, &curves, excluded);
        summary["experiment"] = serde_json::to_value(&config.experiment).expect("serializable");
        trec_io::write_json(&out.join("summary.json"), &summary)?;
    }
    log::info!(
        "wrote {} trials and {} curves to {}",
        records.len(),
        curves.len(),
        out.display()
    );
    Ok(())
}

/// Reads feature-row CSVs with header `collection,groups,topics,depth,corpus_size,tau_ap`.
pub fn read_feature_rows(path: &Path) -> Result<Vec<FeatureRow>> {
    let source = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::read(path, std::io::Error::other(e)))?;
    let header = reader
        .headers()
        .map_err(|e| Error::parse(&source, 1, e.to_string()))?;
    if header.iter().collect::<Vec<_>>().join(",") != report::FEATURE_HEADER {
        return Err(Error::parse(
            &source,
            1,
            format!("header must be {}", report::FEATURE_HEADER),
        ));
    }
    let mut rows = Vec::new();
    for (i, row) in reader.deserialize::<FeatureRow>().enumerate() {
        let line = i as u64 + 2;
        let row = row.map_err(|e| Error::parse(&source, line, e.to_string()))?;
        row.validate()
            .map_err(|e| Error::parse(&source, line, e.to_string()))?;
        rows.push(row);
    }
    Ok(rows)
}

fn read_all_rows(paths: &[PathBuf]) -> Result<Vec<FeatureRow>> {
    let mut rows = Vec::new();
    for path in paths {
        require(path, "--rows")?;
        rows.extend(read_feature_rows(path)?);
    }
    Ok(rows)
}

fn cmd_predict(command: PredictCommand) -> Result<()> {
    match command {
        PredictCommand::Fit { rows, out } => {
            let rows = read_all_rows(&rows)?;
            let model = fit_ols(&rows)?;
            for f in &model.dropped {
                log::warn!(
                    "feature {f} is constant in the training rows; its weight is fixed at 0"
                );
            }
            log::info!("fitted {} rows with {:?}", rows.len(), model.solver);
            trec_io::write_json(&out, &model)
        }
        PredictCommand::Apply {
            model,
            groups,
            topics,
            depth,
            corpus,
        } => {
            require(&model, "--model")?;
            let text = fs::read_to_string(&model).map_err(|e| Error::read(&model, e))?;
            let source = model.display().to_string();
            let model: RegressionModel = serde_json::from_str(&text)
                .map_err(|e| Error::parse(&source, e.line() as u64, e.to_string()))?;
            if model.format_version != MODEL_FORMAT_VERSION {
                return Err(Error::parse(
                    &source,
                    0,
                    format!("format_version {} is not supported", model.format_version),
                ));
            }
            for (name, v) in [
                ("--groups", groups),
                ("--topics", topics),
                ("--depth", depth),
                ("--corpus", corpus),
            ] {
                if v < 1 {
                    return Err(Error::Usage(format!("{name}: must be >= 1")));
                }
            }
            let p = predict(&model, groups, topics, depth, corpus);
            if p.out_of_range {
                log::warn!("raw prediction {} clamped to [-1, 1]", report::fmt6(p.raw));
            }
            println!("{}", report::fmt6(p.value));
            Ok(())
        }
        PredictCommand::Loto { rows, out } => {
            let mut by_collection: BTreeMap<String, Vec<FeatureRow>> = BTreeMap::new();
            for row in read_all_rows(&rows)? {
                by_collection
                    .entry(row.collection.clone())
                    .or_default()
                    .push(row);
            }
            let report = loto(&by_collection)?;
            for r in report.rows.iter().filter(|r| r.clamped > 0) {
                log::warn!(
                    "{}: {} held-out predictions clamped to [-1, 1]",
                    r.held_out,
                    r.clamped
                );
            }
            let text = report::loto_csv(&report);
            match out {
                Some(path) => trec_io::write_text(&path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
    }
}

fn synth_spec(args: &SynthArgs) -> SynthSpec {
    let mut spec = SynthSpec::default();
    macro_rules! set {
        ($($field:ident <- $arg:ident),* $(,)?) => {
            $(if let Some(v) = args.$arg.clone() { spec.$field = v; })*
        };
    }
    set!(
        name <- name,
        n_groups <- groups,
        runs_per_group <- runs_per_group,
        manual_fraction <- manual_fraction,
        n_topics <- topics,
        corpus_size <- corpus_size,
        prevalence <- prevalence,
        quality_spread <- quality_spread,
        hard_fraction <- hard_fraction,
        pool_depth <- pool_depth,
        seed <- seed,
    );
    spec
}

fn cmd_synth(args: SynthArgs) -> Result<()> {
    let spec = synth_spec(&args);
    let c = generate(&spec)?;
    let out = &args.out;
    c.runs
        .par_iter()
        .map(|run| trec_io::write_run(&out.join("runs").join(format!("{}.run", run.tag())), run))
        .collect::<Result<()>>()?;
    trec_io::write_qrels(&out.join("qrels.txt"), &c.qrels)?;
    trec_io::write_qrels(&out.join("truth.txt"), &c.truth)?;
    trec_io::write_manifest_file(&out.join("manifest.csv"), &c.manifest)?;
    trec_io::write_json(
        &out.join("meta.json"),
        &trec_io::MetaFile {
            meta: c.meta.clone(),
            strata: None,
        },
    )?;
    let template = json!({
        "collection": {"runs": "runs", "qrels": "qrels.txt", "manifest": "manifest.csv", "meta": "meta.json"},
        "output_dir": "results",
        "experiment": {"seed": spec.seed},
    });
    trec_io::write_json(&out.join("simulate.json"), &template)?;
    trec_io::write_json(&out.join("spec.json"), &spec)?;
    log::info!(
        "wrote {} runs over {} topics to {}",
        c.runs.len(),
        c.meta.topics.len(),
        out.display()
    );
    Ok(())
}
