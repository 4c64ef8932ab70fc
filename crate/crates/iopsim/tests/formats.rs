use iopsim::json::{self, CondensationJson, MeasurementJson, OperatorJson};
use iopsim::RunConfig;
use iopsim_core::condensation::CondensationStructure;
use iopsim_core::random;
use iopsim_core::MeasurementSystem;
use proptest::prelude::*;

#[test]
fn measurement_system_round_trip() {
    let z = CondensationStructure::from_blocks([("up", 1), ("down", 1)], (0.0, 1.0)).unwrap();
    let ms = MeasurementSystem::projective(&z, vec![0.5, -0.5]).unwrap();
    let text = serde_json::to_string(&MeasurementJson::from_system(&ms)).unwrap();
    let back: MeasurementJson = serde_json::from_str(&text).unwrap();
    let ms2 = back.to_system().unwrap();
    assert_eq!(ms2.labels(), ms.labels());
    assert_eq!(ms2.values(), ms.values());
    assert_eq!(ms2.kraus(), ms.kraus());
    assert!(ms2.is_definitive());
}

#[test]
fn condensation_structure_round_trip() {
    let c = CondensationStructure::from_blocks([("alive", 2), ("dead", 2)], (0.5, 3.0)).unwrap();
    let text = serde_json::to_string(&CondensationJson::from_structure(&c)).unwrap();
    let back: CondensationJson = serde_json::from_str(&text).unwrap();
    let c2 = back.to_structure().unwrap();
    assert_eq!(c2.labels(), c.labels());
    assert_eq!(c2.projectors(), c.projectors());
    assert_eq!(c2.period(), (0.5, 3.0));
}

#[test]
fn invalid_structure_in_json_is_rejected() {
    // Overlapping projectors.
    let text = r#"{"labels":["a","b"],"projectors":[{"dim":1,"entries":[[1,0]]},{"dim":1,"entries":[[1,0]]}],"period":[0,1]}"#;
    let parsed: CondensationJson = serde_json::from_str(text).unwrap();
    assert!(parsed.to_structure().is_err());
}

#[test]
fn report_schema() {
    let report = RunConfig::new("stern-gerlach").run().unwrap();
    let j = json::report(&report);
    for key in ["scenario", "passed", "inputs", "outputs", "checks", "notes"] {
        assert!(j.get(key).is_some(), "missing {key}");
    }
    let branches = j["outputs"]["branches"].as_array().unwrap();
    assert_eq!(branches.len(), 2);
    for b in branches {
        assert_eq!(b["weight"], 0.5);
        assert_eq!(b["rho_s"]["dim"], 2);
        assert_eq!(b["rho_t"]["dim"], 3);
    }
    let u: OperatorJson = serde_json::from_value(j["outputs"]["interaction_unitary"].clone()).unwrap();
    assert_eq!(u.dim, 6);
    for c in j["checks"].as_array().unwrap() {
        assert!(c["residual"].is_number() && c["tolerance"].is_number());
        assert!(c["kind"].is_string());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn operator_json_is_lossless(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = random::seeded(seed);
        let m = random::info_operator_matrix(&mut rng, n);
        let text = serde_json::to_string(&OperatorJson::from_matrix(&m)).unwrap();
        let back = json::parse_operators(&text).unwrap();
        prop_assert_eq!(back, vec![m]);
    }
}
