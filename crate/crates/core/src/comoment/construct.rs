//! Explicit comoment constructions.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{blades, q, qi, Blade, ExprCoeff, Numeric, Scalar, DEFAULT_DIGITS, Q};
use crate::error::{Error, Result};
use crate::forms::{contract, contract_element, lie_derivative_vf, sphere_samples, tangential_values, DiffForm, VectorField};
use crate::lie::{
    adjoint_action, ce_boundary, make_g2, make_so, make_so_on_lower_block, make_so_plus_dilation, make_u1, so_index,
    Caps, LieAlgebra, MultiVector,
};
use crate::lie::algebra::G2_TERMS;

use super::model::{ActionModel, Manifold};
use super::types::{koszul_sign, Comoment};

/// `f_k(q) = (-1)^{k-1} ς(k) ι(v_q) α` for an invariant potential `dα = ω`.
pub fn comoment_from_invariant_potential(model: &ActionModel, alpha: &DiffForm, caps: &Caps) -> Result<Comoment> {
    if alpha.exterior_d() != *model.omega() {
        return Err(Error::NotAPotential);
    }
    for (i, v) in model.fields().iter().enumerate() {
        if !lie_derivative_vf(v, alpha)?.is_zero() {
            return Err(Error::NotInvariant(model.algebra().labels()[i].clone()));
        }
    }
    let d = model.plectic_degree();
    let dim = model.algebra().dim();
    let mut components = Vec::new();
    for k in 1..d {
        let mut comp = BTreeMap::new();
        if k <= dim {
            caps.check("comoment component", dim, k)?;
            let sign = if k % 2 == 1 { koszul_sign(k) } else { -koszul_sign(k) };
            for b in blades(dim, k) {
                let f = contract_element(model.fields(), &MultiVector::basis(b), alpha)?;
                let f = if sign < 0 { f.neg() } else { f };
                if !f.is_zero() {
                    comp.insert(b, f);
                }
            }
        }
        components.push(comp);
    }
    Comoment::new(model.arity(), d, components)
}

/// so(n) on `R^n` with the volume form.
pub fn sorn_model(n: usize) -> Result<ActionModel> {
    let g = make_so(n)?;
    ActionModel::new(format!("so({n}) on R^{n}"), g, Manifold::Ambient, DiffForm::volume(n))
}

/// `ι_E dx^{0..n-1} / n`, the Euler potential of the volume.
pub fn euler_potential(n: usize) -> DiffForm {
    contract(&VectorField::euler(n), &DiffForm::volume(n))
        .expect("volume has positive degree")
        .scale(&q(1, n as i64))
}

/// The comoment of so(n) on `(R^n, dx^{0..n-1})` from the Euler potential.
pub fn comoment_sorn(n: usize, caps: &Caps) -> Result<(ActionModel, Comoment)> {
    let model = sorn_model(n)?;
    let f = comoment_from_invariant_potential(&model, &euler_potential(n), caps)?;
    Ok((model, f))
}

/// `ρ dx^0 ∧ ... ∧ dx^n` with `ρ = R^{-(n+1)}` on `R^{n+1} \ 0`.
pub fn rescaled_volume(n: usize) -> DiffForm {
    let m = n + 1;
    DiffForm::volume(m).mul_fn(&ExprCoeff::big_r_pow(m, -(m as i32)))
}

/// `J_m(τ) = ∫_0^τ cos^m`, with `cos τ = r/R`, `sin τ = x^0/R`.
fn cos_power_integral(arity: usize, m: usize) -> ExprCoeff {
    match m {
        0 => ExprCoeff::tau(arity),
        1 => ExprCoeff::x(arity, 0).mul(&ExprCoeff::big_r_pow(arity, -1)),
        _ => {
            // cos^{m-1} sin / m + (m-1)/m J_{m-2}
            let lead = ExprCoeff::r_pow(arity, m as i32 - 1)
                .mul(&ExprCoeff::big_r_pow(arity, -(m as i32)))
                .mul(&ExprCoeff::x(arity, 0))
                .scale(&q(1, m as i64));
            lead.add(&cos_power_integral(arity, m - 2).scale(&q(m as i64 - 1, m as i64)))
        }
    }
}

/// An so(n)- and dilation-invariant primitive of the rescaled volume:
/// `β = r^{-n} J_{n-1}(τ) dx^1 ∧ ... ∧ dx^n`.
///
/// Along each ray `∂_0` hits `J_{n-1}(τ)` through `∂_0 τ = cos^2 τ / r`, so
/// `∂_0` of the coefficient is `r^{-n-1} cos^{n+1} τ = R^{-(n+1)}`. The
/// coefficient has degree `-n`, hence `L_E β = 0`. It is singular on the
/// axis `r = 0`, as any invariant primitive must be.
pub fn beta_primitive(n: usize) -> Result<DiffForm> {
    if n < 2 {
        return Err(Error::Degenerate(format!("beta needs n >= 2, got {n}")));
    }
    let m = n + 1;
    let h = ExprCoeff::r_pow(m, -(n as i32)).mul(&cos_power_integral(m, n - 1));
    Ok(DiffForm::volume_from(m, 1).mul_fn(&h))
}

/// Which contraction to use when inducing by a central cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InduceVariant {
    /// `f^p_i(q) = -ς(k) f_{i+k}(q ∧ p)`.
    ContractComoment,
    /// `f^p_i(q) = (-1)^i ς(i) ς(k) ι(v_q) f_k(p)`: `-ς(k) f_k(p)` is an
    /// invariant potential of `ι(v_p) ω` over the centralizer.
    ContractImage,
}

/// A comoment for `(M, ι(v_p) ω)` over the subalgebra centralizing the cycle
/// `p`. `centralizer` lists the basis elements spanning it (all of `g` when
/// `None`).
pub fn induce_by_cycle(
    model: &ActionModel,
    f: &Comoment,
    p: &MultiVector,
    centralizer: Option<&[usize]>,
    variant: InduceVariant,
) -> Result<(ActionModel, Comoment)> {
    let g = model.algebra();
    if !ce_boundary(g, p).is_zero() {
        return Err(Error::NotACycle);
    }
    let all: Vec<usize> = (0..g.dim()).collect();
    let idx = centralizer.unwrap_or(&all);
    for &x in idx {
        if !adjoint_action(g, x, p).is_zero() {
            return Err(Error::NotCentralizing(x));
        }
    }
    let k = p.degree();
    let d = model.plectic_degree();
    if k >= d {
        return Err(Error::DegreeMismatch(format!("cycle of degree {k} against a {d}-form")));
    }
    let (h, _) = g.basis_subalgebra(&format!("{}_p", g.name()), idx)?;
    let omega_p = contract_element(model.fields(), p, model.omega())?;
    let new_model = ActionModel::new(format!("{} contracted", model.name()), h.clone(), model.manifold(), omega_p)?;
    let dp = d - k;
    let h_fields = new_model.fields().to_vec();
    let mut components = Vec::new();
    for i in 1..dp {
        let mut comp = BTreeMap::new();
        if i <= h.dim() {
            for b in blades(h.dim(), i) {
                let val = match variant {
                    InduceVariant::ContractComoment => {
                        // q ∧ p with q's indices mapped back into g
                        let qg = MultiVector::wedge_of(&b.indices().map(|j| idx[j]).collect::<Vec<_>>());
                        let v = f.apply(i + k, &qg.wedge(p));
                        if koszul_sign(k) > 0 { v.neg() } else { v }
                    }
                    InduceVariant::ContractImage => {
                        let fp = f.apply(k, p);
                        let v = contract_element(&h_fields, &MultiVector::basis(b), &fp)?;
                        let sign = if i % 2 == 0 { 1 } else { -1 } * koszul_sign(i) * koszul_sign(k);
                        if sign < 0 { v.neg() } else { v }
                    }
                };
                if !val.is_zero() {
                    comp.insert(b, val);
                }
            }
        }
        components.push(comp);
    }
    let fp = Comoment::new(model.arity(), dp, components)?;
    Ok((new_model, fp))
}

/// `f_i ∘ Λ^i j` for a Lie algebra homomorphism `j: h → g` given on basis
/// elements.
pub fn restrict_to_subalgebra(
    model: &ActionModel,
    f: &Comoment,
    h: &LieAlgebra,
    images: &[MultiVector],
) -> Result<(ActionModel, Comoment)> {
    let g = model.algebra();
    g.is_homomorphism_from(h, images)?;
    let rep = g.representation().ok_or(Error::NoRepresentation)?;
    let m = model.arity();
    // representation of h through j
    let mats = images
        .iter()
        .map(|im| {
            let mut a = crate::algebra::QMatrix::zeros(m);
            for (b, c) in im.terms() {
                a = a.add(&rep[b.indices().next().unwrap()].scale(c));
            }
            a
        })
        .collect();
    let hr = LieAlgebra::from_matrices(h.name(), h.labels().to_vec(), mats)?;
    let new_model = ActionModel::new(format!("{} restricted to {}", model.name(), h.name()), hr, model.manifold(), model.omega().clone())?;
    let mut components = Vec::new();
    for i in 1..=f.stored() {
        let mut comp = BTreeMap::new();
        if i <= h.dim() {
            for b in blades(h.dim(), i) {
                let img = b
                    .indices()
                    .fold(MultiVector::basis(Blade::EMPTY), |acc, j| acc.wedge(&images[j]));
                let v = f.apply(i, &img);
                if !v.is_zero() {
                    comp.insert(b, v);
                }
            }
        }
        components.push(comp);
    }
    Ok((new_model, Comoment::new(m, f.plectic_degree(), components)?))
}

/// so(n) acting on `S^n ⊂ R^{n+1}` through `diag(0, A)` with the round
/// volume `ι_E dx^{0..n}`.
pub fn son_sphere_model(n: usize) -> Result<ActionModel> {
    let g = make_so_on_lower_block(n)?;
    let m = n + 1;
    let omega = contract(&VectorField::euler(m), &DiffForm::volume(m))?;
    ActionModel::new(format!("so({n}) on S^{n}"), g, Manifold::UnitSphere, omega)
}

/// The comoment of so(n) on `S^n`: built from the invariant potential
/// `β` of the rescaled volume for `so(n) + <id>`, induced by the central
/// cycle `id`, and restricted to so(n). Components are the ambient forms
/// `(-1)^k ς(k) ι(v_q) ι_E β`.
pub fn comoment_son_sphere(n: usize, caps: &Caps) -> Result<(ActionModel, Comoment)> {
    let h = make_so_plus_dilation(n)?;
    let m = n + 1;
    let id = h.dim() - 1;
    let eta_model = ActionModel::new(format!("so({n})+R on R^{m}"), h, Manifold::Ambient, rescaled_volume(n))?;
    let s = comoment_from_invariant_potential(&eta_model, &beta_primitive(n)?, caps)?;
    let p = MultiVector::basis(Blade::single(id));
    let (contracted, fp) = induce_by_cycle(&eta_model, &s, &p, None, InduceVariant::ContractImage)?;
    let so = make_so(n)?;
    let images: Vec<MultiVector> = (0..so.dim()).map(|i| MultiVector::basis(Blade::single(i))).collect();
    let (_, f) = restrict_to_subalgebra(&contracted, &fp, &so, &images)?;
    Ok((son_sphere_model(n)?, f))
}

/// so(n) on `S^{n-1} ⊂ R^n` with `ι_E dx^{0..n-1}`.
pub fn son_on_own_sphere(n: usize) -> Result<ActionModel> {
    let g = make_so(n)?;
    let omega = contract(&VectorField::euler(n), &DiffForm::volume(n))?;
    ActionModel::new(format!("so({n}) on S^{}", n - 1), g, Manifold::UnitSphere, omega)
}

/// Signed basis element `A_ab` for any distinct `a, b` (1-based).
fn a_elem(n: usize, a: usize, b: usize) -> MultiVector {
    if a < b {
        MultiVector::basis(Blade::single(so_index(n, a, b)))
    } else {
        MultiVector::basis(Blade::single(so_index(n, b, a))).neg()
    }
}

/// `F^1(A_ab) = -1/(n-2) Σ_{k ≠ a,b} A_ka ∧ A_kb`, a primitive of `A_ab`.
pub fn f1_primitive(n: usize, a: usize, b: usize) -> MultiVector {
    let mut out = MultiVector::zero(2);
    for k in (1..=n).filter(|&k| k != a && k != b) {
        out = out.add(&a_elem(n, k, a).wedge(&a_elem(n, k, b)));
    }
    out.scale(&q(-1, n as i64 - 2))
}

/// Endpoints `(a, b)` of a basis element of so(n).
fn pair_of(n: usize, i: usize) -> (usize, usize) {
    for a in 1..=n {
        for b in a + 1..=n {
            if so_index(n, a, b) == i {
                return (a, b);
            }
        }
    }
    unreachable!("index {i} out of range for so({n})")
}

/// `F^1` extended linearly to `Λ^1 so(n)`.
pub fn f1_apply(n: usize, x: &MultiVector) -> MultiVector {
    let mut out = MultiVector::zero(2);
    for (b, c) in x.terms() {
        let (i, j) = pair_of(n, b.indices().next().unwrap());
        out = out.add(&f1_primitive(n, i, j).scale(c));
    }
    out
}

/// A primitive `F^2(p)` with `∂F^2(p) = p - F^1(∂p)` for a basis pair `p`.
pub fn f2_primitive(n: usize, blade: Blade) -> MultiVector {
    let idx = blade.to_vec();
    let (a, b) = pair_of(n, idx[0]);
    let (c, d) = pair_of(n, idx[1]);
    let shared: Vec<usize> = [a, b].into_iter().filter(|x| *x == c || *x == d).collect();
    if shared.is_empty() {
        // 1/2 (F^1(A_ab) ∧ A_cd - A_ab ∧ F^1(A_cd)); each term bounds ±p
        let t1 = f1_primitive(n, a, b).wedge(&a_elem(n, c, d));
        let t2 = a_elem(n, a, b).wedge(&f1_primitive(n, c, d));
        return t1.sub(&t2).scale(&q(1, 2));
    }
    // A_ab ∧ A_cd = s * A_ja ∧ A_jb with j shared
    let j = shared[0];
    let x = if a == j { b } else { a };
    let y = if c == j { d } else { c };
    let s = {
        let lhs = a_elem(n, a, b).wedge(&a_elem(n, c, d));
        let rhs = a_elem(n, j, x).wedge(&a_elem(n, j, y));
        if lhs == rhs { qi(1) } else { qi(-1) }
    };
    // -1/(n-2) Σ_k A_kx ∧ A_jy ∧ A_kj
    let mut out = MultiVector::zero(3);
    for k in (1..=n).filter(|&k| k != j && k != x && k != y) {
        out = out.add(&a_elem(n, k, x).wedge(&a_elem(n, j, y)).wedge(&a_elem(n, k, j)));
    }
    out.scale(&(q(-1, n as i64 - 2) * s))
}

/// The components `f_1`, `f_2` of a comoment for so(n) on `S^{n-1}`,
/// contracting `ω` with the fundamental fields of `F^1`, `F^2`:
/// `f_1(x) = -ι(v_{F^1 x}) ω` and `f_2(p) = ι(v_{F^2 p}) ω`.
///
/// Both primitives are checked in `Λ• so(n)` before use.
pub fn f12_so(n: usize) -> Result<(ActionModel, Comoment)> {
    if n < 3 {
        return Err(Error::Degenerate(format!("F^1 divides by n - 2; n = {n}")));
    }
    let model = son_on_own_sphere(n)?;
    let g = model.algebra();
    let d = model.plectic_degree();
    let mut comp1 = BTreeMap::new();
    for i in 0..g.dim() {
        let x = MultiVector::basis(Blade::single(i));
        let f1 = f1_apply(n, &x);
        if ce_boundary(g, &f1) != x {
            return Err(Error::Degenerate(format!("F^1 is not a primitive of {}", g.labels()[i])));
        }
        if d >= 2 {
            let v = contract_element(model.fields(), &f1, model.omega())?.neg();
            if !v.is_zero() {
                comp1.insert(Blade::single(i), v);
            }
        }
    }
    let mut components = vec![comp1];
    if d >= 4 {
        let mut comp2 = BTreeMap::new();
        for b in blades(g.dim(), 2) {
            let p = MultiVector::basis(b);
            let f2 = f2_primitive(n, b);
            let target = p.sub(&f1_apply(n, &ce_boundary(g, &p)));
            if ce_boundary(g, &f2) != target {
                return Err(Error::Degenerate(format!("F^2 is not a primitive on {:?}", b.to_vec())));
            }
            let v = contract_element(model.fields(), &f2, model.omega())?;
            if !v.is_zero() {
                comp2.insert(b, v);
            }
        }
        components.push(comp2);
    }
    if d < 2 {
        components.clear();
    }
    let f = Comoment::new(n, d, components)?;
    Ok((model, f))
}

/// The associative 3-form `φ` on `R^7`.
pub fn g2_form() -> DiffForm {
    DiffForm::constant(7, &G2_TERMS)
}

/// G2 acting on `(S^6, j*φ)`.
pub fn g2_sphere_model() -> Result<ActionModel> {
    ActionModel::new("g2 on S^6", make_g2()?, Manifold::UnitSphere, g2_form())
}

/// G2 acting on `S^6` with the round volume.
pub fn g2_volume_model() -> Result<ActionModel> {
    let omega = contract(&VectorField::euler(7), &DiffForm::volume(7))?;
    ActionModel::new("g2 on S^6 (volume)", make_g2()?, Manifold::UnitSphere, omega)
}

/// `f_k(q) = (-1)^{k-1} ς(k) ι(v_q) ι_E(φ/3)`.
pub fn comoment_g2(caps: &Caps) -> Result<(ActionModel, Comoment)> {
    let model = g2_sphere_model()?;
    let alpha = contract(&VectorField::euler(7), &g2_form())?.scale(&q(1, 3));
    let f = comoment_from_invariant_potential(&model, &alpha, caps)?;
    Ok((model, f))
}

/// `λ = x^0 dx^1 - x^1 dx^0 + x^2 dx^3 - x^3 dx^2`.
pub fn hopf_lambda() -> DiffForm {
    let m = 4;
    let x = |i| ExprCoeff::x(m, i);
    DiffForm::dx(m, 1)
        .mul_fn(&x(0))
        .sub(&DiffForm::dx(m, 0).mul_fn(&x(1)))
        .add(&DiffForm::dx(m, 3).mul_fn(&x(2)))
        .sub(&DiffForm::dx(m, 2).mul_fn(&x(3)))
}

/// u(1) acting on `S^3 ⊂ C^2` by the complex structure, with the volume.
pub fn hopf_model() -> Result<ActionModel> {
    let omega = contract(&VectorField::euler(4), &DiffForm::volume(4))?;
    ActionModel::new("u(1) on S^3", make_u1(2)?, Manifold::UnitSphere, omega)
}

/// Seed of the point fixing the Hopf scalar.
const HOPF_SEED: u64 = 1;

/// `f_1(J) = c λ` with `c` fixed by `d f_1(J) = -ι_{v_J} ω` at one rational
/// point of `S^3`; the verifier then checks it everywhere.
pub fn comoment_hopf() -> Result<(ActionModel, Comoment, Q)> {
    let model = hopf_model()?;
    let lambda = hopf_lambda();
    let dl = lambda.exterior_d();
    let target = contract(&model.fields()[0], model.omega())?.neg();
    let ctx = Numeric::new(DEFAULT_DIGITS);
    let p = sphere_samples(HOPF_SEED, 4, 1).pop().unwrap();
    let lv = tangential_values(&dl, &p, &ctx)?;
    let tv = tangential_values(&target, &p, &ctx)?;
    let mut c = None;
    for (l, t) in lv.iter().zip(&tv) {
        if let (Scalar::Exact(l), Scalar::Exact(t)) = (l, t) {
            if !l.is_zero() {
                c = Some(t / l);
                break;
            }
        }
    }
    let c = c.ok_or_else(|| Error::Degenerate("d lambda vanishes at the calibration point".into()))?;
    let mut comp = BTreeMap::new();
    comp.insert(Blade::single(0), lambda.scale(&c));
    let f = Comoment::new(4, 3, vec![comp, BTreeMap::new()])?;
    Ok((model, f, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_is_a_primitive() {
        for n in 2..=4 {
            let b = beta_primitive(n).unwrap();
            assert_eq!(b.exterior_d(), rescaled_volume(n), "n = {n}");
            let e = VectorField::euler(n + 1);
            assert!(lie_derivative_vf(&e, &b).unwrap().is_zero());
        }
        let b2 = beta_primitive(2).unwrap();
        let h = ExprCoeff::x(3, 0).mul(&ExprCoeff::r_pow(3, -2)).mul(&ExprCoeff::big_r_pow(3, -1));
        assert_eq!(b2.coefficient(Blade::from_sorted(&[1, 2])), h);
    }

    #[test]
    fn f1_examples() {
        // so(3): F^1(l_z) = -l_x ∧ l_y
        assert_eq!(f1_primitive(3, 2, 3), MultiVector::wedge_of(&[0, 1]).neg());
    }

    #[test]
    fn non_invariant_potential_is_rejected() {
        let g = make_so(2).unwrap();
        let model = ActionModel::new("so(2) on R^2", g, Manifold::Ambient, DiffForm::volume(2)).unwrap();
        let alpha = DiffForm::dx(2, 1).mul_fn(&ExprCoeff::x(2, 0));
        let r = comoment_from_invariant_potential(&model, &alpha, &Caps::default());
        assert!(matches!(r, Err(Error::NotInvariant(_))));
        let r = comoment_from_invariant_potential(&model, &DiffForm::dx(2, 0), &Caps::default());
        assert!(matches!(r, Err(Error::NotAPotential)));
    }
}
