use cwsphere::caselab::{run, run_lie_dims_with, run_many, RunConfig, ScenarioId};
use cwsphere::finsler::{quadric_fit, FitClass};
use cwsphere::spheres::{make_model, sample_orbit, OrbitSample, SphereKind};
use cwsphere::spinlie::{gen_spin7, gen_spin8, gen_spin9};

const FAST: [ScenarioId; 4] = [
    ScenarioId::OctonionIdentities,
    ScenarioId::LieDims,
    ScenarioId::G2Zero,
    ScenarioId::Spin9Contradiction,
];

#[test]
fn fixed_seed_reports_are_identical() {
    let cfg = RunConfig::default();
    let a = serde_json::to_string(&run_many(&FAST, &cfg, 7).unwrap()).unwrap();
    let b = serde_json::to_string(&run_many(&FAST, &cfg, 7).unwrap()).unwrap();
    assert_eq!(a, b);
    let c = serde_json::to_string(&run_many(&FAST, &cfg, 8).unwrap()).unwrap();
    assert_ne!(a, c);
}

#[test]
fn single_case_matches_its_slot_in_a_batch() {
    let cfg = RunConfig::default();
    let batch = run_many(&FAST, &cfg, 3).unwrap();
    let alone = run(ScenarioId::G2Zero, &cfg, 3).unwrap();
    let slot = batch.scenarios.iter().find(|s| s.scenario_id == ScenarioId::G2Zero).unwrap();
    assert_eq!(slot, &alone);
}

#[test]
fn report_json_schema() {
    let r = run_many(&[ScenarioId::Spin9Contradiction], &RunConfig::default(), 0).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["pass"], true);
    let s = &v["scenarios"][0];
    assert_eq!(s["scenario_id"], "spin9_contradiction");
    assert!(s["residuals"].as_object().unwrap().values().all(|x| x.is_f64()));
    assert!(s["witnesses"].is_object());
    assert!(s["seed"].is_u64());
    assert!(s["duration_ms"].is_null());
}

#[test]
fn timings_fill_duration() {
    let cfg = RunConfig { timings: true, ..RunConfig::default() };
    let r = run(ScenarioId::Spin9Contradiction, &cfg, 0).unwrap();
    assert!(r.duration_ms.is_some_and(|ms| ms >= 0.0));
}

#[test]
fn corrupted_generator_set_fails_lie_dims() {
    let mut s2 = gen_spin8();
    let last = s2.elements.len() - 1;
    s2.elements[last] = s2.elements[0].clone();
    let r = run_lie_dims_with([gen_spin7(), s2, gen_spin9()]);
    assert!(!r.pass);
    assert!(r.residuals["rank_S2"] < 28.0);
    let healthy = run_lie_dims_with([gen_spin7(), gen_spin8(), gen_spin9()]);
    assert!(healthy.pass, "{}", healthy.to_text());
}

#[test]
fn spin7_line_with_equal_parameters() {
    let cfg = RunConfig { params: Some(vec![1.0, 1.0, 1.0]), ..RunConfig::default() };
    let r = run(ScenarioId::Spin7Line, &cfg, 5).unwrap();
    assert!(r.pass, "{}", r.to_text());
    // Values {−3, −1, 1, 3}: four distinct targets.
    assert_eq!(r.residuals["distinct_targets"], 4.0);
}

#[test]
fn u_ellipsoid_with_equal_eigenvalues() {
    let cfg = RunConfig { params: Some(vec![1.0, 1.0]), samples: Some(200), ..RunConfig::default() };
    let r = run(ScenarioId::UEllipsoid, &cfg, 11).unwrap();
    assert!(r.pass, "{}", r.to_text());
    assert!(r.residuals["S3_fit_residual"] < 1e-8);
}

#[test]
fn orbit_sample_file_round_trip() {
    let model = make_model(SphereKind::U, Some(1)).unwrap();
    let mut rng = cwsphere::numkit::RngStream::new(4);
    let x = model.random_element(&mut rng);
    let sample = sample_orbit(&model, &x, 100, 4).unwrap();
    let json = serde_json::to_string(&sample).unwrap();
    assert!(json.contains("\"X\"") && json.contains("\"kind\":\"U\""));
    let back: OrbitSample = serde_json::from_str(&json).unwrap();
    assert_eq!(back.points, sample.points);
    let f = quadric_fit(&back.points).unwrap();
    assert!(matches!(f.classification, FitClass::Randers | FitClass::Riemannian));
}
