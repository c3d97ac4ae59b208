#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use poolforge::trec_io;
use poolforge_core::{CollectionMeta, GroupManifest, Qrels, Run};

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn poolforge(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_poolforge"))
        .args(args)
        .env_remove("POOLFORGE_SEED")
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs");
    Output {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn s(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

pub struct Fixture {
    pub runs: PathBuf,
    pub manifest: PathBuf,
    pub qrels: PathBuf,
    pub meta: PathBuf,
}

/// Writes runs, manifest, qrels and meta under `dir`.
pub fn write_collection(
    dir: &Path,
    runs: &[Run],
    qrels: &Qrels,
    corpus: u64,
    depth: usize,
) -> Fixture {
    let f = Fixture {
        runs: dir.join("runs"),
        manifest: dir.join("manifest.csv"),
        qrels: dir.join("qrels.txt"),
        meta: dir.join("meta.json"),
    };
    let mut manifest = GroupManifest::new();
    for run in runs {
        manifest.insert(run.tag(), run.group(), run.kind()).unwrap();
        trec_io::write_run(&f.runs.join(format!("{}.run", run.tag())), run).unwrap();
    }
    trec_io::write_manifest_file(&f.manifest, &manifest).unwrap();
    trec_io::write_qrels(&f.qrels, qrels).unwrap();
    let meta =
        CollectionMeta::new("fixture", corpus, depth, qrels.topics().cloned().collect()).unwrap();
    trec_io::write_json(&f.meta, &trec_io::MetaFile { meta, strata: None }).unwrap();
    f
}
