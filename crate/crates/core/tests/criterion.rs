//! The existence criterion on spheres reproduces the known verdicts.

use msk_core::comoment::{obstruction_cp, obstruction_verdicts, predict_comoment_existence, DEFAULT_SEED};
use msk_core::forms::sphere_sample;
use msk_core::lie::Caps;
use msk_core::registry::{predict_expected, predict_model, SPHERE_CASES};

#[test]
fn registry_verdicts() {
    let caps = Caps::default();
    for case in SPHERE_CASES {
        let model = case.model().unwrap();
        let p = predict_comoment_existence(&model, DEFAULT_SEED, 3, &caps).unwrap();
        assert_eq!(p.exists, case.expected_exists, "{}: {}", case.id, p.reason);
        if case.obstruction {
            let pt = sphere_sample(DEFAULT_SEED, model.arity());
            let r = obstruction_cp(&model, pt.point(), &caps).unwrap();
            assert!(r.cocycle_closed);
            assert_eq!(r.class_vanishes, case.expected_exists, "{}", case.id);
            assert_eq!(p.cross_check, Some(true), "{}", case.id);
        }
    }
}

#[test]
fn verdict_is_independent_of_the_point() {
    let caps = Caps::default();
    for id in ["so3-s2", "so4-s3", "su2-s3", "hopf-s3"] {
        let model = predict_model(id, None).unwrap();
        let v = obstruction_verdicts(&model, 9, 5, &caps).unwrap();
        assert!(v.iter().all(|&x| x == v[0]), "{id}: {v:?}");
    }
}

#[test]
fn parametrized_predictions() {
    let caps = Caps::default();
    let p = predict_comoment_existence(&predict_model("son-sphere", Some(7)).unwrap(), DEFAULT_SEED, 3, &caps).unwrap();
    assert!(p.exists && !p.transitive);
    assert_eq!(p.orbit_rank, 6);
    for n in 2..=5 {
        let m = predict_model("sonp1-sphere", Some(n)).unwrap();
        let p = predict_comoment_existence(&m, DEFAULT_SEED, 3, &caps).unwrap();
        assert!(p.transitive);
        assert_eq!(p.exists, predict_expected("sonp1-sphere", Some(n)).unwrap());
    }
}
