use iopsim_core::scenarios::{
    cat, contrast, spin_one_example, stern_gerlach, two_slit, CatParams, CheckKind, ScenarioConfig,
    SternGerlachParams, TwoSlitParams, Value,
};
use proptest::prelude::*;

fn cfg() -> ScenarioConfig {
    ScenarioConfig::default()
}

#[test]
fn every_report_has_a_reproduction_and_a_negative_control() {
    let reports = [
        stern_gerlach(SternGerlachParams::default(), &cfg()).unwrap(),
        cat(CatParams::default(), &cfg()).unwrap(),
        spin_one_example(&cfg()).unwrap(),
        two_slit(&TwoSlitParams::default(), &cfg()).unwrap(),
    ];
    for r in &reports {
        assert!(r.all_passed(), "{}: {:?}", r.name, r.checks);
        assert!(r.checks.iter().any(|c| c.kind == CheckKind::Reproduction), "{}", r.name);
        assert!(r.checks.iter().any(|c| c.kind == CheckKind::NegativeControl), "{}", r.name);
        for c in &r.checks {
            assert!(c.residual.is_finite() && c.tolerance.is_finite(), "{}: {c:?}", r.name);
        }
    }
}

#[test]
fn hbar_rescales_time() {
    // With ħ = 2 a run of duration 2T matches ħ = 1 over T.
    let base = TwoSlitParams {
        grid_n: 32,
        slits: vec![(10, 12), (20, 22)],
        steps: 10,
        dt: 0.5,
        packet_width: 8.0,
        ..TwoSlitParams::default()
    };
    let doubled = TwoSlitParams { dt: 1.0, ..base.clone() };
    let a = two_slit(&base, &cfg()).unwrap();
    let b = two_slit(&doubled, &ScenarioConfig { hbar: 2.0, ..cfg() }).unwrap();
    match (a.get("intensity_coherent"), b.get("intensity_coherent")) {
        (Some(Value::Reals(x)), Some(Value::Reals(y))) => {
            let gap = x.iter().zip(y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
            assert!(gap < 1e-9, "{gap}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn asymmetric_slits_skip_the_symmetry_check() {
    let params = TwoSlitParams {
        slits: vec![(40, 44), (70, 74)],
        ..TwoSlitParams::default()
    };
    let r = two_slit(&params, &cfg()).unwrap();
    assert!(r.find_check("mirror-symmetric").is_none());
    match r.get("intensity_coherent") {
        Some(Value::Reals(v)) => assert!(contrast(v) > 0.0),
        other => panic!("{other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stern_gerlach_any_prior(p in 0.0f64..=1.0, seed in any::<u64>()) {
        let r = stern_gerlach(SternGerlachParams { p_up_prior: p }, &ScenarioConfig { seed, ..cfg() }).unwrap();
        prop_assert!(r.all_passed(), "{:?}", r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
    }

    #[test]
    fn cat_any_prior(p in 0.0f64..=1.0, steps in 1usize..40, dt in 0.01f64..1.0) {
        let r = cat(CatParams { p_plus: p, steps, dt }, &cfg()).unwrap();
        prop_assert!(r.all_passed(), "{:?}", r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
    }

    #[test]
    fn two_slit_normalised_for_any_geometry(a in 0usize..28, w in 1usize..4, p in 0.05f64..=1.0) {
        let params = TwoSlitParams {
            grid_n: 32,
            p_pass: p,
            slits: vec![(a, a + w)],
            steps: 6,
            dt: 0.5,
            packet_width: 8.0,
        };
        let r = two_slit(&params, &cfg()).unwrap();
        prop_assert!(r.all_passed(), "{:?}", r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
    }
}
