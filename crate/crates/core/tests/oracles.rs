//! Frozen values and worked examples.

use msk_core::algebra::{q, qi, Blade, ExprCoeff, Numeric, DEFAULT_DIGITS};
use msk_core::comoment::*;
use msk_core::forms::{contract, sphere_samples, DiffForm, VectorField};
use msk_core::lie::{homology, make_so, make_so_plus_dilation, Caps, MultiVector};

fn dims(n: usize) -> Vec<usize> {
    let g = make_so(n).unwrap();
    (0..=g.dim()).map(|k| homology(&g, k, &Caps::default()).unwrap().dim_homology).collect()
}

#[test]
fn small_homology() {
    assert_eq!(dims(3), vec![1, 0, 0, 1]);
    assert_eq!(dims(4), vec![1, 0, 0, 2, 0, 0, 1]);
}

#[test]
fn beta_closed_forms() {
    let m = 4;
    let x0 = ExprCoeff::x(m, 0);
    let r = |e| ExprCoeff::r_pow(m, e);
    let big_r = |e| ExprCoeff::big_r_pow(m, e);
    let h3 = x0.mul(&r(-2)).mul(&big_r(-2)).scale(&q(1, 2)).add(&ExprCoeff::tau(m).mul(&r(-3)).scale(&q(1, 2)));
    let b3 = beta_primitive(3).unwrap();
    assert_eq!(b3.coefficient(Blade::from_sorted(&[1, 2, 3])), h3);
    let m = 5;
    let x0 = ExprCoeff::x(m, 0);
    let h4 = x0
        .mul(&ExprCoeff::r_pow(m, -2))
        .mul(&ExprCoeff::big_r_pow(m, -3))
        .scale(&q(1, 3))
        .add(&x0.mul(&ExprCoeff::r_pow(m, -4)).mul(&ExprCoeff::big_r_pow(m, -1)).scale(&q(2, 3)));
    assert_eq!(beta_primitive(4).unwrap().coefficient(Blade::from_sorted(&[1, 2, 3, 4])), h4);
}

/// `ρ((n+2)x^0 - (n+1) r τ) dx^{1..n}` leaves a `τ` term under `d`.
#[test]
fn displayed_beta_is_not_a_primitive() {
    for n in 2..=4 {
        let m = n + 1;
        let rho = ExprCoeff::big_r_pow(m, -(m as i32));
        let c = ExprCoeff::x(m, 0)
            .scale(&qi(n as i64 + 2))
            .sub(&ExprCoeff::r(m).mul(&ExprCoeff::tau(m)).scale(&qi(n as i64 + 1)));
        let naive = DiffForm::volume_from(m, 1).mul_fn(&rho.mul(&c));
        let defect = naive.exterior_d().sub(&rescaled_volume(n));
        assert!(!defect.is_zero(), "n = {n}");
        assert!(!defect.is_tau_free(), "n = {n}");
    }
}

#[test]
fn euler_potentials() {
    let phi = g2_form();
    let a = contract(&VectorField::euler(7), &phi).unwrap().scale(&q(1, 3));
    assert_eq!(a.exterior_d(), phi);
    let terms: Vec<(Vec<usize>, String)> = phi.terms().map(|(b, c)| (b.to_vec(), c.to_string())).collect();
    assert_eq!(terms.len(), 7);
    for (b, c) in [([0, 1, 2], "1"), ([0, 3, 4], "1"), ([0, 5, 6], "1"), ([1, 3, 5], "1"), ([1, 4, 6], "-1"), ([2, 4, 5], "-1"), ([2, 3, 6], "-1")] {
        assert!(terms.contains(&(b.to_vec(), c.to_string())), "{b:?}");
    }
    for n in 2..=5 {
        assert_eq!(euler_potential(n).exterior_d(), DiffForm::volume(n));
    }
}

#[test]
fn hopf_scalar_and_lambda() {
    let (model, _, c) = comoment_hopf().unwrap();
    assert_eq!(c, q(1, 2));
    // λ(v_J) = -|x|^2 is constant on the sphere
    let lv = contract(&model.fields()[0], &hopf_lambda()).unwrap().as_function();
    let ctx = Numeric::new(DEFAULT_DIGITS);
    for p in sphere_samples(3, 4, 5) {
        assert_eq!(lv.eval(p.point(), &ctx).unwrap().as_exact(), Some(&qi(-1)));
    }
}

#[test]
fn zero_comoment_fails_at_k1() {
    let (model, f) = comoment_sorn(3, &Caps::default()).unwrap();
    let zero = Comoment::zero(f.arity(), f.plectic_degree());
    let rep = verify_comoment("zero", &zero, &model, &VerifyOptions::default()).unwrap();
    assert!(!rep.passed());
    assert!(rep.equations.iter().any(|e| e.k == 1 && !e.pass));
}

#[test]
fn restriction_to_a_subalgebra() {
    let (model, f) = comoment_sorn(3, &Caps::default()).unwrap();
    let so2 = make_so(2).unwrap();
    let (m2, f2) = restrict_to_subalgebra(&model, &f, &so2, &[MultiVector::basis(Blade::single(0))]).unwrap();
    assert!(verify_comoment("so2", &f2, &m2, &VerifyOptions::default()).unwrap().passed());
    let so3 = make_so(3).unwrap();
    let id: Vec<MultiVector> = (0..3).map(|i| MultiVector::basis(Blade::single(i))).collect();
    let (_, same) = restrict_to_subalgebra(&model, &f, &so3, &id).unwrap();
    for i in 0..3 {
        assert_eq!(same.component(1, Blade::single(i)), f.component(1, Blade::single(i)));
    }
    let bad = vec![id[0].clone(), id[0].clone(), id[1].clone()];
    assert!(restrict_to_subalgebra(&model, &f, &so3, &bad).is_err());
}

#[test]
fn induced_comoments_verify_for_both_variants() {
    for n in 2..=3 {
        let h = make_so_plus_dilation(n).unwrap();
        let id = h.dim() - 1;
        let model = ActionModel::new("eta", h, Manifold::Ambient, rescaled_volume(n)).unwrap();
        let s = comoment_from_invariant_potential(&model, &beta_primitive(n).unwrap(), &Caps::default()).unwrap();
        let p = MultiVector::basis(Blade::single(id));
        for variant in [InduceVariant::ContractComoment, InduceVariant::ContractImage] {
            let (mp, fp) = induce_by_cycle(&model, &s, &p, None, variant).unwrap();
            let rep = verify_comoment("induced", &fp, &mp, &VerifyOptions::default()).unwrap();
            assert!(rep.passed(), "n = {n}, {variant:?}");
        }
        let zero = MultiVector::zero(1);
        let (_, fz) = induce_by_cycle(&model, &s, &zero, None, InduceVariant::ContractImage).unwrap();
        assert!((1..=fz.stored()).all(|k| fz.component_map(k).unwrap().is_empty()));
        if n == 3 {
            // A_12 is a cycle but not central in so(3)
            let a12 = MultiVector::basis(Blade::single(0));
            let r = induce_by_cycle(&model, &s, &a12, None, InduceVariant::ContractImage);
            assert!(matches!(r, Err(msk_core::Error::NotCentralizing(_))));
        }
    }
}

#[test]
fn equivariance() {
    let caps = Caps::default();
    let opts = VerifyOptions::default();
    let (m, f) = comoment_sorn(3, &caps).unwrap();
    assert!(verify_equivariance("sorn", &f, &m, &opts).unwrap().passed());
    let (m, f) = comoment_g2(&caps).unwrap();
    assert!(verify_equivariance("g2", &f, &m, &opts).unwrap().passed());
    let (m, f) = comoment_sorn(3, &caps).unwrap();
    let bumped = f.component(1, Blade::single(0)).add(&DiffForm::dx(3, 0));
    let g = f.with_value(1, Blade::single(0), bumped).unwrap();
    assert!(!verify_equivariance("perturbed", &g, &m, &opts).unwrap().passed());
}

#[test]
fn golden_rendering() {
    let b = beta_primitive(2).unwrap();
    assert_eq!(b.to_string(), "(x0/(r^2*R)) dx1^dx2");
    let v = VectorField::euler(2);
    assert_eq!(contract(&v, &DiffForm::volume(2)).unwrap().to_string(), "(-x1) dx0 + (x0) dx1");
}
