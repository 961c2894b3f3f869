use proptest::prelude::*;
use sectorplan::world::ObstacleSampler;
use sectorplan::{
    euclidean_distance, generate_custom, generate_scenario, load_scenario, save_scenario, Scenario, ScenarioKind,
    ScenarioParams,
};

/// Upper 1% point of chi-square with 15 degrees of freedom.
const CHI2_15_CRIT_001: f64 = 30.57791416689249;

#[test]
fn s4_centers_are_uniform_on_a_4x4_grid() {
    let params = ScenarioParams::default();
    let mut sampler = ObstacleSampler::new(ScenarioKind::S4, 1000, 7, params).unwrap();
    let mut counts = [0usize; 16];
    for i in 0..1000 {
        let c = sampler.center(i).unwrap();
        let col = ((c.x() / params.width * 4.0) as usize).min(3);
        let row = ((c.y() / params.height * 4.0) as usize).min(3);
        counts[row * 4 + col] += 1;
    }
    let expected = 1000.0 / 16.0;
    let chi2: f64 = counts.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
    assert!(chi2 < CHI2_15_CRIT_001, "chi2 = {chi2}, counts = {counts:?}");
}

#[test]
fn every_kind_respects_bounds_and_keep_out() {
    let params = ScenarioParams::default();
    for kind in ScenarioKind::GENERATED {
        for seed in 0..30 {
            let s = generate_scenario(kind, seed, params).unwrap();
            assert_eq!(s.obstacles().len(), kind.obstacle_count().unwrap());
            for d in s.obstacles() {
                assert!(s.in_bounds(d.center()));
                assert!(euclidean_distance(d.center(), s.source()) > 2.0 * params.obstacle_radius);
                assert!(euclidean_distance(d.center(), s.destination()) > 2.0 * params.obstacle_radius);
            }
            assert!(s.is_free(s.source()) && s.is_free(s.destination()));
        }
    }
}

#[test]
fn custom_count_uses_the_named_distribution() {
    let s = generate_custom(ScenarioKind::S4, 100, 3, ScenarioParams::default()).unwrap();
    assert_eq!(s.kind(), ScenarioKind::Custom);
    assert_eq!(s.obstacles().len(), 100);
    let again = generate_custom(ScenarioKind::S4, 100, 3, ScenarioParams::default()).unwrap();
    assert_eq!(s.to_json(), again.to_json());
}

#[test]
fn parse_errors_carry_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"version\": 1,\n  \"kind\": \"S4\",\n  oops\n}\n").unwrap();
    let err = load_scenario(&path).unwrap_err().to_string();
    assert!(err.contains("line 4"), "{err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn save_load_round_trip(kind_ix in 0usize..6, seed in any::<u64>()) {
        let kind = ScenarioKind::GENERATED[kind_ix];
        let s = generate_scenario(kind, seed, ScenarioParams::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        save_scenario(&s, &path).unwrap();
        let back = load_scenario(&path).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(back.digest(), s.digest());
        prop_assert_eq!(Scenario::from_json(&s.to_json()).unwrap(), s);
    }
}
