use std::collections::BTreeSet;
use std::io::Cursor;

use poolforge::config::SimulateConfig;
use poolforge::trec_io::{
    load_manifest, parse_qrels, parse_run_file, serialize_qrels, serialize_run, write_manifest,
};
use poolforge_core::synthkit::{generate, SynthSpec};
use poolforge_core::{DocId, Qrels, TopicId};
use proptest::prelude::*;
use serde_json::Value;

fn qrels_strategy() -> impl Strategy<Value = Qrels> {
    prop::collection::btree_map((1u32..20, 1u32..200), -1i32..4, 0..80).prop_map(|m| {
        let mut q = Qrels::new("q");
        for ((t, d), g) in m {
            q.insert(
                TopicId::new(format!("t{t}")).unwrap(),
                DocId::new(format!("doc-{d}")).unwrap(),
                g,
            )
            .unwrap();
        }
        q
    })
}

proptest! {
    #[test]
    fn qrels_round_trip(q in qrels_strategy()) {
        let mut buf = Vec::new();
        serialize_qrels(&q, &mut buf).unwrap();
        let back = parse_qrels(Cursor::new(buf), "mem", "q").unwrap();
        prop_assert_eq!(back, q);
    }
}

#[test]
fn synthetic_runs_and_manifest_round_trip() {
    let spec = SynthSpec {
        n_groups: 3,
        runs_per_group: 2,
        n_topics: 4,
        corpus_size: 200,
        ..SynthSpec::default()
    };
    let c = generate(&spec).unwrap();
    let mut buf = Vec::new();
    write_manifest(&c.manifest, &mut buf).unwrap();
    let manifest = load_manifest(Cursor::new(buf), "mem").unwrap();
    assert_eq!(manifest, c.manifest);
    for run in &c.runs {
        let mut buf = Vec::new();
        serialize_run(run, &mut buf).unwrap();
        let back = parse_run_file(Cursor::new(buf), "mem", &manifest).unwrap();
        assert_eq!(&back, run);
    }
}

fn keys(v: &Value) -> BTreeSet<String> {
    v.as_object().unwrap().keys().cloned().collect()
}

#[test]
fn schema_lists_exactly_the_config_fields() {
    let schema: Value =
        serde_json::from_str(include_str!("../schema/simulate-config.schema.json")).unwrap();
    let text = r#"{"collection": {"runs": "r", "qrels": "q", "manifest": "m", "meta": "x"}, "output_dir": "o"}"#;
    let config = serde_json::to_value(SimulateConfig::from_json(text, "mem").unwrap()).unwrap();
    let props = &schema["properties"];
    assert_eq!(keys(props), keys(&config));
    for section in ["collection", "experiment"] {
        assert_eq!(
            keys(&props[section]["properties"]),
            keys(&config[section]),
            "{section}"
        );
    }
    // Every schema default parses back to the built-in default.
    let defaults: serde_json::Map<String, Value> = props["experiment"]["properties"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, v)| (k.clone(), v["default"].clone()))
        .collect();
    let from_schema: poolforge_core::simulator::ExperimentConfig =
        serde_json::from_value(Value::Object(defaults)).unwrap();
    assert_eq!(
        from_schema,
        poolforge_core::simulator::ExperimentConfig::default()
    );
}
