//! Definitional oracles, deliberately written the slow and obvious way.
#![allow(dead_code)]

use std::collections::BTreeMap;

/// Every permutation of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub fn labels(perm: &[usize]) -> Vec<String> {
    perm.iter().map(|i| format!("s{i:02}")).collect()
}

fn position(list: &[String], item: &str) -> usize {
    list.iter().position(|x| x == item).unwrap()
}

/// Pairwise concordant-minus-discordant over all pairs.
pub fn kendall_oracle(reference: &[String], estimate: &[String]) -> f64 {
    let n = reference.len();
    let mut score = 0i64;
    for a in 0..n {
        for b in a + 1..n {
            let (x, y) = (&reference[a], &reference[b]);
            let same = (position(estimate, x) < position(estimate, y)) == (a < b);
            score += if same { 1 } else { -1 };
        }
    }
    score as f64 / (n * (n - 1) / 2) as f64
}

/// Top-weighted AP correlation straight from its definition.
pub fn tau_ap_oracle(reference: &[String], estimate: &[String]) -> f64 {
    let n = estimate.len();
    let mut sum = 0.0;
    for i in 1..n {
        let item = &estimate[i];
        let correct = (0..i)
            .filter(|&j| position(reference, &estimate[j]) < position(reference, item))
            .count();
        sum += correct as f64 / i as f64;
    }
    2.0 / (n - 1) as f64 * sum - 1.0
}

pub fn max_drop_oracle(reference: &[String], estimate: &[String]) -> usize {
    reference
        .iter()
        .enumerate()
        .map(|(r, item)| position(estimate, item).saturating_sub(r))
        .max()
        .unwrap()
}

/// AP with each precision recomputed from scratch.
pub fn ap_oracle(ranking: &[&str], judged: &BTreeMap<&str, i32>, cutoff: usize) -> Option<f64> {
    let total = judged.values().filter(|&&g| g > 0).count();
    if total == 0 {
        return None;
    }
    let rel = |d: &str| judged.get(d).is_some_and(|&g| g > 0);
    let top = &ranking[..ranking.len().min(cutoff)];
    let mut sum = 0.0;
    for i in 0..top.len() {
        if rel(top[i]) {
            let hits = top[..=i].iter().filter(|d| rel(d)).count();
            sum += hits as f64 / (i + 1) as f64;
        }
    }
    Some(sum / total as f64)
}

pub fn ndcg_oracle(ranking: &[&str], judged: &BTreeMap<&str, i32>, k: usize) -> Option<f64> {
    let dcg = |gains: &[f64]| -> f64 {
        gains
            .iter()
            .take(k)
            .enumerate()
            .map(|(i, g)| g / ((i + 2) as f64).log2())
            .sum()
    };
    let gains: Vec<f64> = ranking
        .iter()
        .map(|d| judged.get(d).map_or(0.0, |&g| g.max(0) as f64))
        .collect();
    let mut ideal: Vec<f64> = judged.values().map(|&g| g.max(0) as f64).collect();
    ideal.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let idcg = dcg(&ideal);
    (idcg > 0.0).then(|| dcg(&gains) / idcg)
}
