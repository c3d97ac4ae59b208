use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use serde::Serialize;

use super::TrialRecord;
use crate::error::{Error, Result};
use crate::metrics::MetricId;
use crate::rankcorr::{curve_auc, pearson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CurveKey {
    pub topic_size: usize,
    pub depth: usize,
    pub metric: MetricId,
    pub include_manual: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub group_count: usize,
    pub mean_tau_ap: f64,
    pub mean_max_drop: f64,
    pub mean_unique_relevant: f64,
}

/// Mean reusability per group count for one configuration.
///
/// AUC and Pearson values are `None` where they are undefined: fewer than two
/// points, or a constant series.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LearningCurve {
    pub key: CurveKey,
    pub points: Vec<CurvePoint>,
    pub auc_tau_ap: Option<f64>,
    pub auc_max_drop: Option<f64>,
    pub pearson_tau_ap: Option<f64>,
    pub pearson_max_drop: Option<f64>,
}

fn defined(value: Result<f64>) -> Result<Option<f64>> {
    match value {
        Ok(v) => Ok(Some(v)),
        Err(Error::UndefinedCorrelation(_) | Error::TooFewItems(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Averages records over samples, per curve key and group count.
///
/// Every key must cover every group count seen in `records`, each with
/// sample indices exactly `1..=N` where `N` is the largest index present.
pub fn aggregate_curves(records: &[TrialRecord]) -> Result<Vec<LearningCurve>> {
    if records.is_empty() {
        return Err(Error::EmptyInput("trial records"));
    }
    let n = records.iter().map(|r| r.sample_index).max().unwrap_or(0);
    let all_g: BTreeSet<usize> = records.iter().map(|r| r.group_count).collect();
    let mut cells: BTreeMap<CurveKey, BTreeMap<usize, BTreeMap<usize, &TrialRecord>>> =
        BTreeMap::new();
    for r in records {
        let key = CurveKey {
            topic_size: r.topic_size,
            depth: r.depth,
            metric: r.metric,
            include_manual: r.include_manual,
        };
        let cell = cells
            .entry(key)
            .or_default()
            .entry(r.group_count)
            .or_default();
        if cell.insert(r.sample_index, r).is_some() {
            return Err(Error::MissingCell(format!(
                "{key:?}, g = {}: sample {} recorded twice",
                r.group_count, r.sample_index
            )));
        }
    }
    let mut curves = Vec::with_capacity(cells.len());
    for (key, by_g) in cells {
        let mut points = Vec::with_capacity(all_g.len());
        for &g in &all_g {
            let samples = by_g
                .get(&g)
                .ok_or_else(|| Error::MissingCell(format!("{key:?}: no records for g = {g}")))?;
            if let Some(i) = (1..=n).find(|i| !samples.contains_key(i)) {
                return Err(Error::MissingCell(format!(
                    "{key:?}, g = {g}: sample {i} of {n} missing"
                )));
            }
            if samples.len() != n {
                return Err(Error::MissingCell(format!(
                    "{key:?}, g = {g}: sample index outside 1..={n}"
                )));
            }
            let mean =
                |f: fn(&TrialRecord) -> f64| samples.values().map(|r| f(r)).sum::<f64>() / n as f64;
            points.push(CurvePoint {
                group_count: g,
                mean_tau_ap: mean(|r| r.tau_ap),
                mean_max_drop: mean(|r| r.max_drop as f64),
                mean_unique_relevant: mean(|r| r.unique_relevant as f64),
            });
        }
        let gs: Vec<f64> = points.iter().map(|p| p.group_count as f64).collect();
        let tau_ap: Vec<f64> = points.iter().map(|p| p.mean_tau_ap).collect();
        let drop: Vec<f64> = points.iter().map(|p| p.mean_max_drop).collect();
        let series = |ys: &[f64]| -> Vec<(usize, f64)> {
            points
                .iter()
                .zip(ys)
                .map(|(p, &y)| (p.group_count, y))
                .collect()
        };
        curves.push(LearningCurve {
            key,
            auc_tau_ap: defined(curve_auc(&series(&tau_ap)))?,
            auc_max_drop: defined(curve_auc(&series(&drop)))?,
            pearson_tau_ap: defined(pearson(&gs, &tau_ap))?,
            pearson_max_drop: defined(pearson(&gs, &drop))?,
            points,
        });
    }
    Ok(curves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn record(g: usize, i: usize, tau_ap: f64) -> TrialRecord {
        TrialRecord {
            group_count: g,
            sample_index: i,
            sampled_groups: vec![],
            topic_size: 50,
            depth: 100,
            metric: MetricId::Map1000,
            include_manual: true,
            tau: tau_ap,
            tau_ap,
            max_drop: 0,
            unique_relevant: 10 * g,
            excluded_topics: 0,
        }
    }

    #[test]
    fn flat_curve() {
        let records: Vec<_> = (1..=5).map(|g| record(g, 1, 1.0)).collect();
        let curves = aggregate_curves(&records).unwrap();
        assert_eq!(curves.len(), 1);
        let c = &curves[0];
        assert!(c.points.iter().all(|p| p.mean_tau_ap == 1.0));
        assert_eq!(c.auc_tau_ap, Some(4.0));
        assert_eq!(c.pearson_tau_ap, None);
        assert_eq!(c.auc_max_drop, Some(0.0));
    }

    #[test]
    fn means_over_samples() {
        let records = vec![
            record(1, 1, 0.8),
            record(1, 2, 1.0),
            record(2, 1, 0.8),
            record(2, 2, 1.0),
        ];
        let c = &aggregate_curves(&records).unwrap()[0];
        assert!(c.points.iter().all(|p| (p.mean_tau_ap - 0.9).abs() < 1e-15));
        assert_eq!(c.points[1].mean_unique_relevant, 20.0);
    }

    #[test]
    fn upward_trend_has_positive_pearson() {
        let records: Vec<_> = (1..=6)
            .flat_map(|g| (1..=3).map(move |i| record(g, i, 0.1 * g as f64 + 0.01 * i as f64)))
            .collect();
        let c = &aggregate_curves(&records).unwrap()[0];
        assert!(c.pearson_tau_ap.unwrap() > 0.99);
    }

    #[test]
    fn gaps_are_reported() {
        let records = vec![record(1, 1, 0.5), record(1, 2, 0.5), record(2, 1, 0.5)];
        let err = aggregate_curves(&records).unwrap_err();
        assert!(
            matches!(err, Error::MissingCell(ref m) if m.contains("g = 2")),
            "{err}"
        );
        let mut other = record(2, 1, 0.5);
        other.depth = 20;
        let err = aggregate_curves(&[record(1, 1, 0.5), record(2, 1, 0.5), other]).unwrap_err();
        assert!(
            matches!(err, Error::MissingCell(ref m) if m.contains("g = 1")),
            "{err}"
        );
        assert!(aggregate_curves(&[record(1, 1, 0.5), record(1, 1, 0.5)]).is_err());
        assert!(aggregate_curves(&[]).is_err());
    }
}
