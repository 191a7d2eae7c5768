use mpbandit::document::{KindDoc, OutputDoc, RuleDoc, RunDoc, SlotOrderDoc};
use mpbandit::{ExperimentDoc, InstanceDoc, PolicyDoc};
use proptest::prelude::*;

fn roundtrip(doc: &ExperimentDoc) -> (String, String) {
    let once = serde_json::to_string_pretty(doc).unwrap();
    let parsed: ExperimentDoc = serde_json::from_str(&once).unwrap();
    assert_eq!(&parsed, doc);
    (once, serde_json::to_string_pretty(&parsed).unwrap())
}

#[test]
fn sample_documents_parse_and_reserialize() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data");
    for name in ["algorithm1-pbm.json", "perslot-pos.json", "sweep-pbm.json"] {
        let text = std::fs::read_to_string(format!("{dir}/{name}")).unwrap();
        let doc: ExperimentDoc = serde_json::from_str(&text).unwrap();
        doc.instance.build().unwrap();
        doc.checkpoints().unwrap();
        for p in doc.policy_docs() {
            p.to_spec().unwrap();
        }
        let (a, b) = roundtrip(&doc);
        assert_eq!(a, b);
    }
}

#[test]
fn unknown_fields_are_rejected() {
    let text = r#"{"instance":{"kind":"per_slot","slot_means":[[0.5,0.4],[0.3,0.2]]},
        "policy":{"name":"perslot"},"run":{"horizon":100,"replications":1,"master_seed":0},"seed":3}"#;
    assert!(serde_json::from_str::<ExperimentDoc>(text).is_err());
    let text = r#"{"name":"perslot","gamma":0.1}"#;
    assert!(serde_json::from_str::<PolicyDoc>(text).is_err());
}

#[test]
fn run_block_is_validated() {
    let mut doc = ExperimentDoc {
        instance: InstanceDoc {
            kind: KindDoc::PerSlot,
            exam_probs: None,
            arm_means: None,
            slot_means: Some(vec![vec![0.5, 0.4], vec![0.3, 0.2], vec![0.2, 0.1]]),
        },
        policy: Some(PolicyDoc::named("perslot")),
        policies: None,
        run: RunDoc {
            horizon: 5000,
            checkpoints: None,
            replications: 1,
            master_seed: 0,
        },
        output: None,
    };
    assert_eq!(doc.checkpoints().unwrap(), vec![1000, 1259, 1585, 1995, 2512, 3162, 3981, 5000]);
    doc.run.checkpoints = Some(vec![10, 6000]);
    assert!(doc.checkpoints().unwrap_err().to_string().contains("run.checkpoints"));
    doc.run.checkpoints = None;
    doc.run.replications = 0;
    assert!(doc.checkpoints().unwrap_err().to_string().contains("run.replications"));
}

fn arb_policy() -> impl Strategy<Value = PolicyDoc> {
    (
        prop::sample::select(vec!["algorithm1", "perslot", "ranked_ucb", "oracle", "uniform"]),
        prop::option::of(1e-6f64..1e-3),
        prop::option::of(1e-12f64..1e-3),
        prop::option::of(prop::sample::select(vec![SlotOrderDoc::Known, SlotOrderDoc::Empirical])),
        prop::option::of(prop::sample::select(vec![RuleDoc::ListValue, RuleDoc::SlotMean])),
    )
        .prop_map(|(name, delta, index_tolerance, slot_order, rule)| PolicyDoc {
            name: name.to_string(),
            delta,
            index_tolerance,
            slot_order,
            rule,
        })
}

proptest! {
    #[test]
    fn serialization_is_idempotent(
        probs in prop::collection::vec(0.01f64..1.0, 1..4),
        means in prop::collection::vec(0.01f64..0.99, 2..6),
        policies in prop::collection::vec(arb_policy(), 0..3),
        single in prop::option::of(arb_policy()),
        horizon in 2u64..10_000_000,
        replications in 1u64..100,
        master_seed in any::<u64>(),
        dir in prop::option::of("[a-z/]{1,12}"),
    ) {
        let doc = ExperimentDoc {
            instance: InstanceDoc {
                kind: KindDoc::Factorized,
                exam_probs: Some(probs),
                arm_means: Some(means),
                slot_means: None,
            },
            policy: single,
            policies: (!policies.is_empty()).then_some(policies),
            run: RunDoc { horizon, checkpoints: Some(vec![2, horizon.max(3)]), replications, master_seed },
            output: dir.map(|dir| OutputDoc { dir }),
        };
        let (a, b) = roundtrip(&doc);
        prop_assert_eq!(a, b);
    }
}
