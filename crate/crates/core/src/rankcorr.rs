//! Agreement between a reference leaderboard and an estimate of it.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::Serialize;

use crate::error::{Error, Result};

/// Two strict rankings of the same item set. The reference is ground truth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankingPair {
    reference: Vec<String>,
    estimate: Vec<String>,
    /// For each estimate position, the item's position in the reference.
    reference_positions: Vec<usize>,
}

impl RankingPair {
    pub fn new(reference: Vec<String>, estimate: Vec<String>) -> Result<Self> {
        if reference.len() != estimate.len() {
            return Err(Error::NotPermutation(format!(
                "reference has {} items, estimate has {}",
                reference.len(),
                estimate.len()
            )));
        }
        let mut position = BTreeMap::new();
        for (i, item) in reference.iter().enumerate() {
            if position.insert(item.as_str(), i).is_some() {
                return Err(Error::NotPermutation(format!(
                    "{item:?} repeated in reference"
                )));
            }
        }
        let mut seen = vec![false; reference.len()];
        let mut reference_positions = Vec::with_capacity(estimate.len());
        for item in &estimate {
            let &pos = position
                .get(item.as_str())
                .ok_or_else(|| Error::NotPermutation(format!("{item:?} missing from reference")))?;
            if core::mem::replace(&mut seen[pos], true) {
                return Err(Error::NotPermutation(format!(
                    "{item:?} repeated in estimate"
                )));
            }
            reference_positions.push(pos);
        }
        Ok(Self {
            reference,
            estimate,
            reference_positions,
        })
    }

    pub fn reference(&self) -> &[String] {
        &self.reference
    }

    pub fn estimate(&self) -> &[String] {
        &self.estimate
    }

    pub fn len(&self) -> usize {
        self.reference.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reference.is_empty()
    }

    /// Reference position of each item, listed in estimate order.
    pub fn reference_positions(&self) -> &[usize] {
        &self.reference_positions
    }

    /// The same items with the roles of reference and estimate exchanged.
    pub fn swapped(&self) -> Self {
        Self::new(self.estimate.clone(), self.reference.clone()).expect("already validated")
    }
}

/// Counts inversions by merge sort.
fn count_inversions(values: &mut [usize], scratch: &mut [usize]) -> u64 {
    let n = values.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut inversions = {
        let (left, right) = values.split_at_mut(mid);
        let (sl, sr) = scratch.split_at_mut(mid);
        count_inversions(left, sl) + count_inversions(right, sr)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if values[i] <= values[j] {
            scratch[k] = values[i];
            i += 1;
        } else {
            scratch[k] = values[j];
            inversions += (mid - i) as u64;
            j += 1;
        }
        k += 1;
    }
    scratch[k..k + mid - i].copy_from_slice(&values[i..mid]);
    k += mid - i;
    scratch[k..k + n - j].copy_from_slice(&values[j..n]);
    values.copy_from_slice(&scratch[..n]);
    inversions
}

/// Kendall's tau: (concordant - discordant) / (n(n-1)/2).
pub fn kendall_tau(p: &RankingPair) -> Result<f64> {
    let n = p.len();
    if n < 2 {
        return Err(Error::TooFewItems(n));
    }
    let mut values = p.reference_positions.clone();
    let mut scratch = vec![0; n];
    let discordant = count_inversions(&mut values, &mut scratch);
    let pairs = (n as u64) * (n as u64 - 1) / 2;
    let concordant = pairs - discordant;
    Ok((concordant as f64 - discordant as f64) / pairs as f64)
}

/// Fenwick tree over reference positions.
struct PrefixCounter {
    tree: Vec<u32>,
}

impl PrefixCounter {
    fn new(n: usize) -> Self {
        Self {
            tree: vec![0; n + 1],
        }
    }

    fn add(&mut self, pos: usize) {
        let mut i = pos + 1;
        while i < self.tree.len() {
            self.tree[i] += 1;
            i += i & i.wrapping_neg();
        }
    }

    /// Number of added positions strictly below `pos`.
    fn below(&self, pos: usize) -> u32 {
        let mut i = pos;
        let mut total = 0;
        while i > 0 {
            total += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        total
    }
}

/// AP rank correlation, top-weighted and asymmetric.
///
/// For each estimate position `i >= 2`, `C(i)` counts the items above it in
/// the estimate that the reference also places above it;
/// `tau_ap = 2/(N-1) * sum C(i)/(i-1) - 1`.
pub fn tau_ap(p: &RankingPair) -> Result<f64> {
    let n = p.len();
    if n < 2 {
        return Err(Error::TooFewItems(n));
    }
    let mut counter = PrefixCounter::new(n);
    let mut sum = 0.0;
    for (i, &pos) in p.reference_positions.iter().enumerate() {
        if i > 0 {
            sum += counter.below(pos) as f64 / i as f64;
        }
        counter.add(pos);
    }
    Ok(2.0 / (n - 1) as f64 * sum - 1.0)
}

/// Largest number of places any item falls in the estimate.
pub fn max_drop(p: &RankingPair) -> usize {
    p.reference_positions
        .iter()
        .enumerate()
        .map(|(est, &reference)| est.saturating_sub(reference))
        .max()
        .unwrap_or(0)
}

/// Largest number of places any item climbs in the estimate.
pub fn max_rise(p: &RankingPair) -> usize {
    p.reference_positions
        .iter()
        .enumerate()
        .map(|(est, &reference)| reference.saturating_sub(est))
        .max()
        .unwrap_or(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AgreementReport {
    pub tau: f64,
    pub tau_ap: f64,
    pub max_drop: usize,
}

pub fn agreement(p: &RankingPair) -> Result<AgreementReport> {
    Ok(AgreementReport {
        tau: kendall_tau(p)?,
        tau_ap: tau_ap(p)?,
        max_drop: max_drop(p),
    })
}

/// Sample Pearson correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::TooFewItems(xs.len()));
    }
    // Exact comparison: a constant series has zero variance even when the
    // floating-point mean is off by an ulp.
    if xs.iter().all(|&x| x == xs[0]) {
        return Err(Error::UndefinedCorrelation("xs"));
    }
    if ys.iter().all(|&y| y == ys[0]) {
        return Err(Error::UndefinedCorrelation("ys"));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    Ok((sxy / libm::sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

/// Trapezoidal area under a curve sampled at strictly increasing `x`.
pub fn curve_auc(points: &[(usize, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::TooFewItems(points.len()));
    }
    let mut area = 0.0;
    for w in points.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if x1 <= x0 {
            return Err(Error::NonIncreasingAxis(x1));
        }
        area += (x1 - x0) as f64 * (y0 + y1) / 2.0;
    }
    Ok(area)
}
