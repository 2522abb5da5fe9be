use msk_core::comoment::*;
use msk_core::lie::Caps;

fn check(case: &str, model: &ActionModel, f: &Comoment, opts: &VerifyOptions) {
    let rep = verify_comoment(case, f, model, opts).unwrap();
    for e in rep.equations.iter().filter(|e| !e.pass) {
        eprintln!("{case}: k={} {:?} residual {}", e.k, e.tuple, e.residual);
    }
    assert!(rep.passed(), "{case}: {:?}", rep.warnings);
}

#[test]
fn sorn_comoments_verify() {
    for n in 2..=4 {
        let (m, f) = comoment_sorn(n, &Caps::default()).unwrap();
        check(&format!("sorn-{n}"), &m, &f, &VerifyOptions::default());
    }
}

#[test]
fn son_sphere_comoments_verify() {
    for n in 2..=4 {
        let (m, f) = comoment_son_sphere(n, &Caps::default()).unwrap();
        check(&format!("son-sphere-{n}"), &m, &f, &VerifyOptions::numeric(4));
    }
}

#[test]
fn g2_comoment_verifies() {
    let (m, f) = comoment_g2(&Caps::default()).unwrap();
    check("g2", &m, &f, &VerifyOptions::default());
}

#[test]
fn hopf_comoment_verifies() {
    let (m, f, c) = comoment_hopf().unwrap();
    eprintln!("hopf c = {c}");
    check("hopf", &m, &f, &VerifyOptions::default());
}

#[test]
fn so_f12_verify() {
    let (m, f) = f12_so(3).unwrap();
    check("so3", &m, &f, &VerifyOptions::default());
    let (m, f) = f12_so(5).unwrap();
    check("so5", &m, &f, &VerifyOptions::default());
}
