use std::collections::BTreeMap;

use poolforge_core::predictor::{fit_ols, loto, predict, Feature, FeatureRow, Solver};
use poolforge_core::Error;
use proptest::prelude::*;

fn law(g: u64, t: u64, p: u64, c: u64) -> f64 {
    0.2 + 0.01 * g as f64 + 0.001 * t as f64 + 0.0005 * p as f64 + 1e-8 * c as f64
}

fn shared_law_collection(name: &str, corpus: u64) -> Vec<FeatureRow> {
    let mut rows = Vec::new();
    for g in [1, 3, 5, 8, 12] {
        for t in [25, 50] {
            for p in [20, 60, 100] {
                rows.push(FeatureRow::new(name, g, t, p, corpus, law(g, t, p, corpus)).unwrap());
            }
        }
    }
    rows
}

#[test]
fn recovers_single_feature_law_and_drops_constants() {
    let rows: Vec<_> = (1..=12)
        .map(|g| FeatureRow::new("c", g, 50, 100, 528_155, 0.5 + 0.01 * g as f64).unwrap())
        .collect();
    let model = fit_ols(&rows).unwrap();
    assert!((model.weights[0] - 0.5).abs() < 1e-9, "{:?}", model.weights);
    assert!((model.weights[1] - 0.01).abs() < 1e-9);
    assert_eq!(&model.weights[2..], &[0.0, 0.0, 0.0]);
    assert_eq!(
        model.dropped,
        vec![Feature::Topics, Feature::Depth, Feature::CorpusSize]
    );
    assert!((predict(&model, 40, 50, 100, 528_155).value - 0.9).abs() < 1e-9);
}

#[test]
fn recovers_full_law() {
    let rows: Vec<_> = [10_000u64, 500_000, 2_000_000]
        .iter()
        .flat_map(|&c| shared_law_collection("c", c))
        .map(|mut r| {
            r.collection = "c".into();
            r
        })
        .collect();
    let model = fit_ols(&rows).unwrap();
    let expected = [0.2, 0.01, 0.001, 0.0005, 1e-8];
    for (w, e) in model.weights.iter().zip(expected) {
        assert!(
            (w - e).abs() < 1e-9 * e.abs().max(1e-3),
            "{:?}",
            model.weights
        );
    }
    assert!(model.dropped.is_empty());
    assert!(model.residual_gradient(&rows) < 1e-9);
}

#[test]
fn loto_on_a_shared_law_is_exact() {
    let corpora = [
        ("c1", 10_000u64),
        ("c2", 50_000),
        ("c3", 250_000),
        ("c4", 1_000_000),
        ("c5", 5_000_000),
    ];
    let data: BTreeMap<String, Vec<FeatureRow>> = corpora
        .iter()
        .map(|(n, c)| (n.to_string(), shared_law_collection(n, *c)))
        .collect();
    let report = loto(&data).unwrap();
    assert_eq!(report.rows.len(), 5);
    for row in &report.rows {
        assert!(row.mse < 1e-10, "{row:?}");
        assert!(!row.shares_corpus_with_training);
        assert_eq!(row.train_rows, 4 * 30);
        assert_eq!(row.clamped, 0);
    }
}

#[test]
fn loto_flags_shared_corpora_and_rejects_bad_input() {
    let mut data: BTreeMap<String, Vec<FeatureRow>> = BTreeMap::new();
    data.insert("a".into(), shared_law_collection("a", 10_000));
    assert!(matches!(loto(&data), Err(Error::TooFewCollections(1))));
    data.insert("b".into(), shared_law_collection("b", 10_000));
    data.insert("c".into(), shared_law_collection("c", 90_000));
    let report = loto(&data).unwrap();
    let shares: Vec<bool> = report
        .rows
        .iter()
        .map(|r| r.shares_corpus_with_training)
        .collect();
    assert_eq!(shares, vec![true, true, false]);
    data.insert("d".into(), shared_law_collection("x", 20_000));
    assert!(matches!(loto(&data), Err(Error::MislabelledRow { .. })));
}

#[test]
fn collinearity_is_reported() {
    let rows: Vec<_> = (1..=10)
        .map(|g| FeatureRow::new("c", g, 10 + g * g, 3 * g, 1_000, 0.01 * g as f64).unwrap())
        .collect();
    match fit_ols(&rows) {
        Err(Error::RankDeficient(names)) => {
            assert!(
                names.contains(&"groups") && names.contains(&"depth"),
                "{names:?}"
            );
        }
        other => panic!("expected rank deficiency, got {other:?}"),
    }
}

#[test]
fn near_collinear_design_uses_the_orthogonal_solver() {
    // depth tracks groups almost exactly; the Gram matrix is badly conditioned
    // but the design keeps full rank.
    let rows: Vec<_> = (1..=2_000u64)
        .map(|g| {
            let p = 2 * g + u64::from(g % 1000 == 0);
            FeatureRow::new("c", g, 50 + g % 7, p, 1_000, 0.1 + 1e-4 * g as f64).unwrap()
        })
        .collect();
    let model = fit_ols(&rows).unwrap();
    assert_eq!(model.solver, Solver::Orthogonal);
    for r in rows.iter().step_by(97) {
        let y = predict(&model, r.groups, r.topics, r.depth, r.corpus_size).raw;
        assert!((y - r.target_tau_ap).abs() < 1e-8);
    }
}

fn rows_strategy() -> impl Strategy<Value = Vec<FeatureRow>> {
    prop::collection::vec(
        (
            1u64..50,
            1u64..250,
            1u64..200,
            1u64..5_000_000,
            -1.0f64..1.0,
        ),
        8..40,
    )
    .prop_map(|v| {
        v.into_iter()
            .map(|(g, t, p, c, y)| FeatureRow::new("c", g, t, p, c, y).unwrap())
            .collect()
    })
}

proptest! {
    #[test]
    fn fit_is_optimal_and_order_free(rows in rows_strategy(), shift in -0.5f64..0.5) {
        let model = match fit_ols(&rows) {
            Ok(m) => m,
            Err(Error::RankDeficient(_)) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        prop_assert!(model.residual_gradient(&rows) < 1e-8 * rows.len() as f64);
        let mut reversed = rows.clone();
        reversed.reverse();
        let again = fit_ols(&reversed).unwrap();
        for r in &rows {
            let x = r.features();
            prop_assert!((model.predict_raw(x) - again.predict_raw(x)).abs() < 1e-9);
            prop_assert!((model.predict_raw(x) - model.predict_standardized(x)).abs() < 1e-9);
        }
        let shifted: Vec<_> = rows
            .iter()
            .map(|r| FeatureRow { target_tau_ap: (r.target_tau_ap * 0.5 + shift).clamp(-1.0, 1.0), ..r.clone() })
            .collect();
        if shifted.iter().zip(&rows).all(|(s, r)| s.target_tau_ap == r.target_tau_ap * 0.5 + shift) {
            let m2 = fit_ols(&shifted).unwrap();
            prop_assert!((m2.weights[0] - (0.5 * model.weights[0] + shift)).abs() < 1e-8);
        }
    }

    #[test]
    fn predictions_are_clamped(rows in rows_strategy(), g in 1u64..10_000) {
        if let Ok(model) = fit_ols(&rows) {
            let p = predict(&model, g, 50, 100, 1_000);
            prop_assert!((-1.0..=1.0).contains(&p.value));
            prop_assert_eq!(p.out_of_range, p.raw != p.value);
        }
    }
}
