//! TREC run, qrels, manifest and collection-meta files.
//!
//! Run files: `topic Q0 docid rank score runtag`, whitespace separated.
//! Qrels: `topic iteration docid grade`. Blank lines and lines starting with
//! `#` are skipped in both. Manifest: CSV with header `run_tag,group,kind`.

use std::collections::{BTreeSet, HashSet};
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use poolforge_core::simulator::TopicStrata;
use poolforge_core::{
    CollectionMeta, DocId, GroupManifest, Qrels, Run, RunEntry, RunKind, TopicId,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn data_lines<'a, R: BufRead + 'a>(
    reader: R,
    source: &'a str,
) -> impl Iterator<Item = Result<(u64, String)>> + 'a {
    reader.lines().enumerate().filter_map(move |(i, line)| {
        let n = i as u64 + 1;
        match line {
            Err(e) => Some(Err(Error::parse(source, n, e.to_string()))),
            Ok(l) => {
                let t = l.trim();
                (!t.is_empty() && !t.starts_with('#')).then(|| Ok((n, t.to_string())))
            }
        }
    })
}

fn columns<'a, const N: usize>(
    line: &'a str,
    source: &str,
    n: u64,
    what: &str,
) -> Result<[&'a str; N]> {
    let cols: Vec<&str> = line.split_whitespace().collect();
    cols.try_into().map_err(|cols: Vec<&str>| {
        Error::parse(
            source,
            n,
            format!("{what} line needs {N} columns, found {}", cols.len()),
        )
    })
}

fn token<'v, T>(
    value: &'v str,
    source: &str,
    n: u64,
    make: impl FnOnce(&'v str) -> poolforge_core::Result<T>,
) -> Result<T> {
    make(value).map_err(|e| Error::parse(source, n, e.to_string()))
}

/// Parses the entries of one run file; every line must carry the same tag.
pub fn parse_run_entries<R: BufRead>(reader: R, source: &str) -> Result<Vec<RunEntry>> {
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for line in data_lines(reader, source) {
        let (n, line) = line?;
        let [topic, _q0, doc, rank, score, tag] = columns::<6>(&line, source, n, "run")?;
        let declared_rank = rank.parse::<u64>().map_err(|_| {
            Error::parse(
                source,
                n,
                format!("rank {rank:?} is not a non-negative integer"),
            )
        })?;
        let score = score
            .parse::<f64>()
            .ok()
            .filter(|s| s.is_finite())
            .ok_or_else(|| {
                Error::parse(source, n, format!("score {score:?} is not a finite number"))
            })?;
        if let Some(first) = entries.first().map(|e: &RunEntry| e.run_tag.as_str()) {
            if first != tag {
                return Err(Error::parse(
                    source,
                    n,
                    format!("run tag {tag:?} differs from {first:?}"),
                ));
            }
        }
        let topic = token(topic, source, n, TopicId::new)?;
        let doc = token(doc, source, n, DocId::new)?;
        if !seen.insert((topic.clone(), doc.clone())) {
            return Err(Error::parse(
                source,
                n,
                format!("document {doc} listed twice for topic {topic}"),
            ));
        }
        entries.push(RunEntry {
            topic,
            doc,
            declared_rank,
            score,
            run_tag: tag.to_string(),
        });
    }
    Ok(entries)
}

/// Parses a run file and attaches group and kind from `manifest`.
pub fn parse_run_file<R: BufRead>(
    reader: R,
    source: &str,
    manifest: &GroupManifest,
) -> Result<Run> {
    let entries = parse_run_entries(reader, source)?;
    let tag = entries
        .first()
        .map(|e| e.run_tag.clone())
        .ok_or_else(|| Error::parse(source, 0, "run file has no entries"))?;
    let entry = manifest.resolve(&tag)?;
    Ok(Run::from_entries(
        tag,
        entry.group.clone(),
        entry.kind,
        entries,
    )?)
}

pub fn parse_qrels<R: BufRead>(reader: R, source: &str, name: &str) -> Result<Qrels> {
    let mut q = Qrels::new(name);
    for line in data_lines(reader, source) {
        let (n, line) = line?;
        let [topic, _iteration, doc, grade] = columns::<4>(&line, source, n, "qrels")?;
        let grade = grade
            .parse::<i32>()
            .map_err(|_| Error::parse(source, n, format!("grade {grade:?} is not an integer")))?;
        let topic = token(topic, source, n, TopicId::new)?;
        let doc = token(doc, source, n, DocId::new)?;
        q.insert(topic, doc, grade)
            .map_err(|e| Error::parse(source, n, e.to_string()))?;
    }
    Ok(q)
}

/// Lines sorted by (topic, doc), iteration 0.
pub fn serialize_qrels<W: Write>(q: &Qrels, mut out: W) -> std::io::Result<()> {
    for (topic, doc, grade) in q.iter() {
        writeln!(out, "{topic} 0 {doc} {grade}")?;
    }
    out.flush()
}

/// Topics in order, documents in canonical order with 1-based ranks.
/// Scores use the shortest representation that parses back exactly.
pub fn serialize_run<W: Write>(run: &Run, mut out: W) -> std::io::Result<()> {
    for (topic, list) in run.rankings() {
        for (i, r) in list.iter().enumerate() {
            writeln!(
                out,
                "{topic} Q0 {} {} {:?} {}",
                r.doc,
                i + 1,
                r.score,
                run.tag()
            )?;
        }
    }
    out.flush()
}

#[derive(Debug, Deserialize)]
struct ManifestRow {
    run_tag: String,
    group: String,
    kind: String,
}

const MANIFEST_HEADER: [&str; 3] = ["run_tag", "group", "kind"];

pub fn load_manifest<R: Read>(reader: R, source: &str) -> Result<GroupManifest> {
    let mut csv = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = csv
        .headers()
        .map_err(|e| Error::parse(source, 1, e.to_string()))?;
    if header.iter().collect::<Vec<_>>() != MANIFEST_HEADER {
        return Err(Error::parse(
            source,
            1,
            format!("header must be {}", MANIFEST_HEADER.join(",")),
        ));
    }
    let mut manifest = GroupManifest::new();
    for row in csv.deserialize::<ManifestRow>() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::parse(source, line, e.to_string())
        })?;
        let line = manifest.len() as u64 + 2;
        let kind =
            RunKind::from_str(&row.kind).map_err(|e| Error::parse(source, line, e.to_string()))?;
        manifest
            .insert(row.run_tag, row.group, kind)
            .map_err(|e| Error::parse(source, line, e.to_string()))?;
    }
    manifest
        .validate()
        .map_err(|e| Error::parse(source, 0, e.to_string()))?;
    Ok(manifest)
}

pub fn write_manifest<W: Write>(manifest: &GroupManifest, out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(MANIFEST_HEADER)?;
    for (tag, entry) in manifest.entries() {
        w.write_record([tag.as_str(), entry.group.as_str(), entry.kind.as_str()])?;
    }
    w.flush()?;
    Ok(())
}

/// Collection meta file: [`CollectionMeta`] fields plus optional topic strata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetaFile {
    #[serde(flatten)]
    pub meta: CollectionMeta,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strata: Option<TopicStrata>,
}

impl MetaFile {
    /// The declared strata, or one stratum holding every topic.
    pub fn strata(&self) -> Result<TopicStrata> {
        match &self.strata {
            Some(s) => {
                s.check_covers(&self.meta.topics)?;
                Ok(s.clone())
            }
            None => Ok(TopicStrata::single("all", self.meta.topics.clone())?),
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::read(path, e))
}

fn source_name(path: &Path) -> String {
    path.display().to_string()
}

pub fn read_run_file(path: &Path, manifest: &GroupManifest) -> Result<Run> {
    parse_run_file(open(path)?, &source_name(path), manifest)
}

/// Reads qrels named after the file stem.
pub fn read_qrels(path: &Path) -> Result<Qrels> {
    let name = path
        .file_stem()
        .map_or("qrels".into(), |s| s.to_string_lossy().into_owned());
    parse_qrels(open(path)?, &source_name(path), &name)
}

pub fn read_manifest(path: &Path) -> Result<GroupManifest> {
    load_manifest(open(path)?, &source_name(path))
}

pub fn read_meta(path: &Path) -> Result<MetaFile> {
    let reader = open(path)?;
    let mut de = serde_json::Deserializer::from_reader(reader);
    let meta: MetaFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let line = e.inner().line() as u64;
        Error::parse(
            source_name(path),
            line,
            format!("{}: {}", e.path(), e.inner()),
        )
    })?;
    meta.meta
        .validate()
        .map_err(|e| Error::parse(source_name(path), 0, e.to_string()))?;
    Ok(meta)
}

/// Regular, non-hidden files of `dir`, sorted by name.
fn run_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::read(dir, e))? {
        let entry = entry.map_err(|e| Error::read(dir, e))?;
        let hidden = entry.file_name().to_string_lossy().starts_with('.');
        let is_file = entry
            .file_type()
            .map_err(|e| Error::read(&entry.path(), e))?
            .is_file();
        if is_file && !hidden {
            files.push(entry.path());
        }
    }
    files.sort();
    Ok(files)
}

/// Loads every run file in `dir` (in parallel), sorted by tag.
pub fn load_runs_dir(dir: &Path, manifest: &GroupManifest) -> Result<Vec<Run>> {
    let files = run_files(dir)?;
    if files.is_empty() {
        return Err(Error::Invalid(poolforge_core::Error::NoRuns));
    }
    let mut runs: Vec<Run> = files
        .par_iter()
        .map(|path| read_run_file(path, manifest))
        .collect::<Result<_>>()?;
    runs.sort_by(|a, b| a.tag().cmp(b.tag()));
    for w in runs.windows(2) {
        if w[0].tag() == w[1].tag() {
            return Err(poolforge_core::Error::DuplicateRunTag(w[0].tag().into()).into());
        }
    }
    let loaded: BTreeSet<&str> = runs.iter().map(|r| r.tag()).collect();
    for tag in manifest
        .entries()
        .keys()
        .filter(|t| !loaded.contains(t.as_str()))
    {
        log::warn!(
            "manifest lists run {tag} but {} has no file for it",
            dir.display()
        );
    }
    Ok(runs)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::write(parent, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::write(path, e))
}

pub fn write_qrels(path: &Path, q: &Qrels) -> Result<()> {
    serialize_qrels(q, create(path)?).map_err(|e| Error::write(path, e))
}

pub fn write_run(path: &Path, run: &Run) -> Result<()> {
    serialize_run(run, create(path)?).map_err(|e| Error::write(path, e))
}

pub fn write_manifest_file(path: &Path, manifest: &GroupManifest) -> Result<()> {
    write_manifest(manifest, create(path)?)
        .map_err(|e| Error::write(path, std::io::Error::other(e)))
}

/// Writes `value` as pretty JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Error::write(path, e.into()))?;
    writeln!(out)
        .and_then(|_| out.flush())
        .map_err(|e| Error::write(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut out = create(path)?;
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Error::write(path, e))
}
