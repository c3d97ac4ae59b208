//! Linear model predicting tau_ap from collection-construction parameters:
//! number of groups (G), topics (T), pool depth (P) and corpus size (C).
//!
//! Features enter the model raw. Internally they are z-scored before solving
//! so that C (up to ~5·10⁷) does not swamp the normal equations; the fitted
//! weights are mapped back to raw-feature space.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cholesky_solve, qr_least_squares, spd_condition, Matrix};

pub const MODEL_FORMAT_VERSION: u32 = 1;
pub const MIN_FIT_ROWS: usize = 5;
/// Above this condition number of the standardized Gram matrix the normal
/// equations are abandoned for an orthogonal solve.
pub const NORMAL_EQUATIONS_MAX_CONDITION: f64 = 1e8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    Groups,
    Topics,
    Depth,
    CorpusSize,
}

impl Feature {
    pub const ALL: [Feature; 4] = [
        Feature::Groups,
        Feature::Topics,
        Feature::Depth,
        Feature::CorpusSize,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Feature::Groups => "groups",
            Feature::Topics => "topics",
            Feature::Depth => "depth",
            Feature::CorpusSize => "corpus_size",
        }
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One simulated configuration and its mean tau_ap.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub collection: String,
    pub groups: u64,
    pub topics: u64,
    pub depth: u64,
    pub corpus_size: u64,
    #[serde(rename = "tau_ap")]
    pub target_tau_ap: f64,
}

impl FeatureRow {
    pub fn new(
        collection: impl Into<String>,
        groups: u64,
        topics: u64,
        depth: u64,
        corpus_size: u64,
        target_tau_ap: f64,
    ) -> Result<Self> {
        let row = Self {
            collection: collection.into(),
            groups,
            topics,
            depth,
            corpus_size,
            target_tau_ap,
        };
        row.validate()?;
        Ok(row)
    }

    pub fn validate(&self) -> Result<()> {
        for (f, v) in Feature::ALL.iter().zip(self.features()) {
            if v < 1.0 {
                return Err(Error::InvalidFeatureRow(format!("{f} must be >= 1")));
            }
        }
        if !(self.target_tau_ap.is_finite() && (-1.0..=1.0).contains(&self.target_tau_ap)) {
            return Err(Error::InvalidFeatureRow(format!(
                "tau_ap {} outside [-1, 1]",
                self.target_tau_ap
            )));
        }
        Ok(())
    }

    pub fn features(&self) -> [f64; 4] {
        [
            self.groups as f64,
            self.topics as f64,
            self.depth as f64,
            self.corpus_size as f64,
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureTransform {
    pub mean: f64,
    /// Always positive; 1 for dropped features.
    pub scale: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    NormalEquations,
    Orthogonal,
}

/// Fitted `ŷ = w0 + w1·G + w2·T + w3·P + w4·C`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegressionModel {
    pub format_version: u32,
    /// Raw-space weights: intercept, then one per [`Feature::ALL`] entry.
    pub weights: [f64; 5],
    /// Weights on the standardized features.
    pub standardized_weights: [f64; 5],
    pub transform: [FeatureTransform; 4],
    /// Features constant in the training data; their weight is zero.
    pub dropped: Vec<Feature>,
    pub solver: Solver,
}

impl RegressionModel {
    pub fn predict_raw(&self, x: [f64; 4]) -> f64 {
        self.weights[0] + (0..4).map(|j| self.weights[j + 1] * x[j]).sum::<f64>()
    }

    /// Same prediction, computed on the standardized scale.
    pub fn predict_standardized(&self, x: [f64; 4]) -> f64 {
        self.standardized_weights[0]
            + (0..4)
                .map(|j| {
                    let t = self.transform[j];
                    self.standardized_weights[j + 1] * (x[j] - t.mean) / t.scale
                })
                .sum::<f64>()
    }

    /// `‖Zᵀ(Zβ − y)‖∞` on the standardized design: zero at the optimum.
    pub fn residual_gradient(&self, rows: &[FeatureRow]) -> f64 {
        let active: Vec<usize> = (0..4)
            .filter(|&j| !self.dropped.contains(&Feature::ALL[j]))
            .collect();
        let z = design(rows, &self.transform, &active);
        let beta: Vec<f64> = core::iter::once(self.standardized_weights[0])
            .chain(active.iter().map(|&j| self.standardized_weights[j + 1]))
            .collect();
        let residual: Vec<f64> = z
            .mul(&beta)
            .iter()
            .zip(rows)
            .map(|(p, r)| p - r.target_tau_ap)
            .collect();
        z.t_mul(&residual).iter().fold(0.0, |m, g| m.max(g.abs()))
    }
}

fn design(rows: &[FeatureRow], transform: &[FeatureTransform; 4], active: &[usize]) -> Matrix {
    let mut columns = vec![vec![1.0; rows.len()]];
    for &j in active {
        let t = transform[j];
        columns.push(
            rows.iter()
                .map(|r| (r.features()[j] - t.mean) / t.scale)
                .collect(),
        );
    }
    Matrix::from_columns(&columns)
}

/// Ordinary least squares over `rows`.
///
/// Features constant across all rows are dropped (recorded in
/// [`RegressionModel::dropped`]); remaining collinearity is an error naming
/// the features involved.
pub fn fit_ols(rows: &[FeatureRow]) -> Result<RegressionModel> {
    if rows.len() < MIN_FIT_ROWS {
        return Err(Error::TooFewRows {
            required: MIN_FIT_ROWS,
            got: rows.len(),
        });
    }
    for r in rows {
        r.validate()?;
    }
    let n = rows.len() as f64;
    let mut transform = [FeatureTransform {
        mean: 0.0,
        scale: 1.0,
    }; 4];
    let mut dropped = Vec::new();
    let mut active = Vec::new();
    for (j, &feature) in Feature::ALL.iter().enumerate() {
        let values: Vec<f64> = rows.iter().map(|r| r.features()[j]).collect();
        let mean = values.iter().sum::<f64>() / n;
        if values.iter().all(|&v| v == values[0]) {
            transform[j] = FeatureTransform {
                mean: values[0],
                scale: 1.0,
            };
            dropped.push(feature);
            continue;
        }
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        transform[j] = FeatureTransform {
            mean,
            scale: libm::sqrt(var),
        };
        active.push(j);
    }
    let y: Vec<f64> = rows.iter().map(|r| r.target_tau_ap).collect();
    let z = design(rows, &transform, &active);
    let k = z.cols;
    let gram = z.gram();
    let normal = if spd_condition(&gram, k) <= NORMAL_EQUATIONS_MAX_CONDITION {
        cholesky_solve(&gram, &z.t_mul(&y), k)
    } else {
        None
    };
    let (beta, solver) = match normal {
        Some(beta) => (beta, Solver::NormalEquations),
        None => match qr_least_squares(&z, &y) {
            Ok(beta) => (beta, Solver::Orthogonal),
            Err(col) => return Err(Error::RankDeficient(collinear_subset(&z, col, &active))),
        },
    };

    let mut standardized = [0.0; 5];
    standardized[0] = beta[0];
    for (slot, &j) in active.iter().enumerate() {
        standardized[j + 1] = beta[slot + 1];
    }
    let mut weights = [0.0; 5];
    weights[0] = standardized[0];
    for j in 0..4 {
        let t = transform[j];
        weights[j + 1] = standardized[j + 1] / t.scale;
        weights[0] -= standardized[j + 1] * t.mean / t.scale;
    }
    Ok(RegressionModel {
        format_version: MODEL_FORMAT_VERSION,
        weights,
        standardized_weights: standardized,
        transform,
        dropped,
        solver,
    })
}

/// Names the features spanning design column `col` (column 0 is the
/// intercept, column `s + 1` is `active[s]`).
fn collinear_subset(z: &Matrix, col: usize, active: &[usize]) -> Vec<&'static str> {
    let name = |c: usize| {
        if c == 0 {
            "intercept"
        } else {
            Feature::ALL[active[c - 1]].name()
        }
    };
    let mut names = Vec::new();
    if col > 0 {
        if let Ok(coef) = qr_least_squares(&z.first_columns(col), z.column(col)) {
            let largest = coef.iter().fold(0.0f64, |m, c| m.max(c.abs()));
            for (c, v) in coef.iter().enumerate() {
                if v.abs() > 1e-6 * largest {
                    names.push(name(c));
                }
            }
        }
    }
    names.push(name(col));
    names
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Prediction {
    /// Clamped to [-1, 1].
    pub value: f64,
    pub raw: f64,
    pub out_of_range: bool,
}

pub fn predict(
    model: &RegressionModel,
    groups: u64,
    topics: u64,
    depth: u64,
    corpus_size: u64,
) -> Prediction {
    let raw = model.predict_raw([
        groups as f64,
        topics as f64,
        depth as f64,
        corpus_size as f64,
    ]);
    let value = raw.clamp(-1.0, 1.0);
    Prediction {
        value,
        raw,
        out_of_range: value != raw,
    }
}

/// Mean squared error between predictions and true values.
pub fn mse(predicted: &[f64], actual: &[f64]) -> Result<f64> {
    if predicted.len() != actual.len() {
        return Err(Error::LengthMismatch {
            left: predicted.len(),
            right: actual.len(),
        });
    }
    if predicted.is_empty() {
        return Err(Error::EmptyInput("mse inputs"));
    }
    let sum: f64 = predicted
        .iter()
        .zip(actual)
        .map(|(p, a)| (p - a) * (p - a))
        .sum();
    Ok(sum / predicted.len() as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LotoRow {
    pub held_out: String,
    /// Some training row comes from a corpus of the same size.
    pub shares_corpus_with_training: bool,
    pub mse: f64,
    pub train_rows: usize,
    pub test_rows: usize,
    /// Held-out predictions that had to be clamped into [-1, 1].
    pub clamped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LotoReport {
    pub rows: Vec<LotoRow>,
}

/// Leave-one-test-collection-out: for each collection, fit on every other
/// collection's rows and score the held-out rows.
///
/// Corpus identity is the corpus size.
pub fn loto(datasets: &BTreeMap<String, Vec<FeatureRow>>) -> Result<LotoReport> {
    if datasets.len() < 2 {
        return Err(Error::TooFewCollections(datasets.len()));
    }
    for (name, rows) in datasets {
        if rows.is_empty() {
            return Err(Error::EmptyCollection(name.clone()));
        }
        if let Some(r) = rows.iter().find(|r| &r.collection != name) {
            return Err(Error::MislabelledRow {
                expected: name.clone(),
                found: r.collection.clone(),
            });
        }
    }
    let mut out = Vec::with_capacity(datasets.len());
    for (held_out, test) in datasets {
        let train: Vec<FeatureRow> = datasets
            .iter()
            .filter(|(name, _)| *name != held_out)
            .flat_map(|(_, rows)| rows.iter().cloned())
            .collect();
        assert!(
            train.iter().all(|r| &r.collection != held_out),
            "held-out rows leaked into training"
        );
        let model = fit_ols(&train)?;
        let predictions: Vec<Prediction> = test
            .iter()
            .map(|r| predict(&model, r.groups, r.topics, r.depth, r.corpus_size))
            .collect();
        let predicted: Vec<f64> = predictions.iter().map(|p| p.value).collect();
        let actual: Vec<f64> = test.iter().map(|r| r.target_tau_ap).collect();
        out.push(LotoRow {
            held_out: held_out.clone(),
            shares_corpus_with_training: test
                .iter()
                .any(|t| train.iter().any(|r| r.corpus_size == t.corpus_size)),
            mse: mse(&predicted, &actual)?,
            train_rows: train.len(),
            test_rows: test.len(),
            clamped: predictions.iter().filter(|p| p.out_of_range).count(),
        });
    }
    Ok(LotoReport { rows: out })
}
