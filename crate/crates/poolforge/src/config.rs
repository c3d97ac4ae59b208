//! The `simulate` job file: collection paths, output location and the
//! experiment grid. Relative paths resolve against the file's directory.
//! `schema/simulate-config.schema.json` documents the format.

use std::fs;
use std::path::{Path, PathBuf};

use poolforge_core::simulator::ExperimentConfig;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollectionPaths {
    /// Directory holding one run file per run.
    pub runs: PathBuf,
    pub qrels: PathBuf,
    pub manifest: PathBuf,
    pub meta: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

fn default_formats() -> Vec<ReportFormat> {
    vec![ReportFormat::Csv, ReportFormat::Json]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub collection: CollectionPaths,
    pub output_dir: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<ReportFormat>,
    #[serde(default)]
    pub experiment: ExperimentConfig,
}

impl SimulateConfig {
    pub fn from_json(text: &str, source: &str) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        let config: SimulateConfig = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let line = e.inner().line() as u64;
            let path = e.path().to_string();
            let message = if path == "." {
                e.inner().to_string()
            } else {
                format!("{path}: {}", e.inner())
            };
            Error::parse(source, line, message)
        })?;
        config.validate().map_err(|m| Error::parse(source, 0, m))?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::read(path, e))?;
        let mut config = Self::from_json(&text, &path.display().to_string())?;
        config.resolve_relative_to(path.parent().unwrap_or(Path::new(".")));
        Ok(config)
    }

    pub fn resolve_relative_to(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.collection.runs);
        fix(&mut self.collection.qrels);
        fix(&mut self.collection.manifest);
        fix(&mut self.collection.meta);
        fix(&mut self.output_dir);
    }

    /// Field-level checks serde cannot express; the message names the field.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let e = &self.experiment;
        if e.n_samples < 1 {
            return Err("experiment.n_samples: must be >= 1".into());
        }
        for (field, values) in [
            ("group_counts", &e.group_counts),
            ("topic_sample_sizes", &e.topic_sample_sizes),
            ("pool_depths", &e.pool_depths),
        ] {
            if let Some(i) = values.iter().position(|&v| v < 1) {
                return Err(format!("experiment.{field}[{i}]: must be >= 1"));
            }
        }
        if e.metrics.is_empty() {
            return Err("experiment.metrics: must list at least one metric".into());
        }
        if self.formats.is_empty() {
            return Err("formats: must list at least one format".into());
        }
        Ok(())
    }

    pub fn wants(&self, format: ReportFormat) -> bool {
        self.formats.contains(&format)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use poolforge_core::MetricId;

    const MINIMAL: &str = r#"{
        "collection": {"runs": "runs", "qrels": "q.txt", "manifest": "m.csv", "meta": "meta.json"},
        "output_dir": "out"
    }"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = SimulateConfig::from_json(MINIMAL, "c").unwrap();
        assert_eq!(c.experiment, ExperimentConfig::default());
        assert_eq!(c.formats, default_formats());
    }

    #[test]
    fn full_config() {
        let text = r#"{
            "collection": {"runs": "r", "qrels": "q", "manifest": "m", "meta": "x"},
            "output_dir": "o",
            "formats": ["csv"],
            "experiment": {"n_samples": 2, "pool_depths": [20, 100], "metrics": ["map", "NDCG_10"],
                           "include_manual": false, "seed": 9, "topic_sampling": "per_group_count",
                           "group_sampling": "nested"}
        }"#;
        let mut c = SimulateConfig::from_json(text, "c").unwrap();
        assert_eq!(
            c.experiment.metrics,
            vec![MetricId::Map1000, MetricId::Ndcg10]
        );
        assert!(!c.wants(ReportFormat::Json));
        c.resolve_relative_to(Path::new("/base"));
        assert_eq!(c.collection.qrels, Path::new("/base/q"));
    }

    #[test]
    fn errors_name_the_field() {
        let cases = [
            (
                r#""experiment": {"pool_depths": [20, "x"]}"#,
                "experiment.pool_depths[1]",
            ),
            (r#""experiment": {"pool_depth": [20]}"#, "pool_depth"),
            (
                r#""experiment": {"metrics": ["p@10"]}"#,
                "experiment.metrics[0]",
            ),
            (r#""experiment": {"n_samples": 0}"#, "experiment.n_samples"),
            (
                r#""experiment": {"group_counts": [3, 0]}"#,
                "experiment.group_counts[1]",
            ),
            (r#""formats": []"#, "formats"),
        ];
        for (extra, field) in cases {
            let text = MINIMAL.replacen(
                "\"output_dir\": \"out\"",
                &format!("\"output_dir\": \"out\", {extra}"),
                1,
            );
            let err = SimulateConfig::from_json(&text, "c").unwrap_err();
            assert!(err.to_string().contains(field), "{err}");
            assert_eq!(err.exit_code(), 2);
        }
        let err = SimulateConfig::from_json(r#"{"output_dir": "o"}"#, "c").unwrap_err();
        assert!(err.to_string().contains("collection"), "{err}");
    }
}
