use msk_core::algebra::{qi, ExprCoeff, SparseMatrix, SparseVec, Q};
use msk_core::forms::{iterated_cartan_residual, multicartan_residual, TaggedField};
use msk_core::lie::{
    adjoint_action, ce_boundary, ce_differential, find_primitive, make_g2, make_so, make_su_realified, Caps,
    LieAlgebra, MultiVector,
};
use msk_core::random::{random_cochain, random_form, random_multivector, random_polynomial, rng};
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

fn expr(seed: u64, arity: usize) -> ExprCoeff {
    let mut r = rng(seed);
    let p = random_polynomial(&mut r, arity, 2, 3);
    match r.gen_range(0..4) {
        0 => p,
        1 => p.mul(&ExprCoeff::r_pow(arity, r.gen_range(-3..=3))),
        2 => p.mul(&ExprCoeff::big_r_pow(arity, r.gen_range(-3..=3))),
        _ => p.mul(&ExprCoeff::tau(arity)).add(&ExprCoeff::r_pow(arity, -1)),
    }
}

fn algebras() -> Vec<LieAlgebra> {
    vec![make_so(3).unwrap(), make_so(4).unwrap(), make_su_realified(2).unwrap()]
}

fn tagged(g: &LieAlgebra, seed: u64) -> TaggedField {
    TaggedField::fundamental(g, random_multivector(&mut rng(seed), g.dim(), 1)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn coefficient_ring_axioms(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (x, y, z) = (expr(a, 3), expr(b, 3), expr(c, 3));
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn partial_derivatives_commute(a in any::<u64>(), i in 0usize..3, j in 0usize..3) {
        let x = expr(a, 3);
        let ij = x.differentiate(i).unwrap().differentiate(j).unwrap();
        let ji = x.differentiate(j).unwrap().differentiate(i).unwrap();
        prop_assert_eq!(ij, ji);
    }

    #[test]
    fn leibniz_rule(a in any::<u64>(), b in any::<u64>(), i in 0usize..3) {
        let (x, y) = (expr(a, 3), expr(b, 3));
        let lhs = x.mul(&y).differentiate(i).unwrap();
        let rhs = x.differentiate(i).unwrap().mul(&y).add(&x.mul(&y.differentiate(i).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rank_nullity(seed in any::<u64>(), rows in 1usize..8, cols in 1usize..8) {
        let mut r = rng(seed);
        let mut data: Vec<SparseVec> = Vec::new();
        for _ in 0..rows {
            let mut row = SparseVec::new();
            for c in 0..cols {
                let v = r.gen_range(-3..=3);
                if v != 0 && r.gen_bool(0.4) {
                    row.insert(c, qi(v));
                }
            }
            data.push(row);
        }
        let m = SparseMatrix::from_rows(cols, data);
        let kernel = m.kernel();
        prop_assert_eq!(m.rank() + kernel.len(), cols);
        for v in &kernel {
            prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        let x0: Vec<Q> = (0..cols).map(|_| qi(r.gen_range(-2..=2))).collect();
        let b = m.mul_vec(&x0);
        let x = m.solve(&b).unwrap().expect("consistent system");
        prop_assert_eq!(m.mul_vec(&x), b);
    }

    #[test]
    fn d_squared_is_zero(seed in any::<u64>(), deg in 0usize..3) {
        let f = random_form(&mut rng(seed), 4, deg);
        prop_assert!(f.exterior_d().exterior_d().is_zero());
    }

    #[test]
    fn boundary_squared_is_zero(seed in any::<u64>(), k in 2usize..5) {
        for g in algebras() {
            let p = random_multivector(&mut rng(seed), g.dim(), k.min(g.dim()));
            prop_assert!(ce_boundary(&g, &ce_boundary(&g, &p)).is_zero(), "{}", g.name());
            let c = random_cochain(&mut rng(seed), g.dim(), (k - 2).min(g.dim() - 2));
            prop_assert!(ce_differential(&g, &ce_differential(&g, &c)).is_zero(), "{}", g.name());
        }
    }

    #[test]
    fn adjoint_action_commutes_with_boundary(seed in any::<u64>(), k in 1usize..4, xi in 0usize..6) {
        let g = make_so(4).unwrap();
        let p = random_multivector(&mut rng(seed), g.dim(), k);
        let lhs = ce_boundary(&g, &adjoint_action(&g, xi, &p));
        let rhs = adjoint_action(&g, xi, &ce_boundary(&g, &p));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn primitives_of_boundaries(seed in any::<u64>(), k in 1usize..4) {
        let g = make_so(4).unwrap();
        let p = ce_boundary(&g, &random_multivector(&mut rng(seed), g.dim(), k + 1));
        let f = find_primitive(&g, &p, &Caps::default()).unwrap().expect("boundaries have primitives");
        prop_assert_eq!(ce_boundary(&g, &f), p);
    }

    #[test]
    fn multicartan_identity(seed in any::<u64>(), k in 1usize..4, use_so4 in any::<bool>()) {
        let g = if use_so4 { make_so(4).unwrap() } else { make_so(3).unwrap() };
        let m = g.rep_size().unwrap();
        let mut r = rng(seed);
        let deg = r.gen_range(k..=m);
        let a = random_form(&mut r, m, deg);
        let xs: Vec<TaggedField> = (0..k).map(|i| tagged(&g, seed.wrapping_add(i as u64 + 1))).collect();
        prop_assert!(multicartan_residual(&g, &xs, &a).unwrap().is_zero());
    }

    #[test]
    fn iterated_cartan_identity(seed in any::<u64>(), k in 1usize..3) {
        let g = make_so(3).unwrap();
        let a = random_form(&mut rng(seed), 3, 2.max(k));
        let v = tagged(&g, seed ^ 0xabcd);
        let xs: Vec<TaggedField> = (0..k).map(|i| tagged(&g, seed.wrapping_add(i as u64 + 7))).collect();
        prop_assert!(iterated_cartan_residual(&g, &v, &xs, &a).unwrap().is_zero());
    }
}

#[test]
fn jacobi_holds_for_every_algebra() {
    let mut all = algebras();
    all.push(make_so(5).unwrap());
    all.push(make_so(6).unwrap());
    let g2 = make_g2().unwrap();
    assert_eq!(g2.dim(), 14);
    all.push(g2);
    for g in &all {
        assert_eq!(g.jacobi_residual(), 0, "{}", g.name());
        assert_eq!(g.representation_residual().unwrap(), 0, "{}", g.name());
    }
}

#[test]
fn random_boundary_has_primitive_in_su2() {
    let g = make_su_realified(2).unwrap();
    let p = ce_boundary(&g, &MultiVector::wedge_of(&[0, 1]));
    let f = find_primitive(&g, &p, &Caps::default()).unwrap().unwrap();
    assert_eq!(ce_boundary(&g, &f), p);
}
