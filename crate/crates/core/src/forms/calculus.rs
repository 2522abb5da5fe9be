//! Contractions and Lie derivatives, plus the multi-Cartan identities as
//! computable residuals.

use crate::algebra::Blade;
use crate::error::{Error, Result};
use crate::lie::{adjoint_action_element, ce_boundary, LieAlgebra, MultiVector};

use super::field::{fundamental_fields, fundamental_multivector, fundamental_of_element, MultiVectorField, VectorField};
use super::form::DiffForm;

/// `ι(Y)a` with `ι(v_1 ∧ ... ∧ v_k) = ι_{v_k} ... ι_{v_1}`.
pub fn interior_product(y: &MultiVectorField, a: &DiffForm) -> Result<DiffForm> {
    if y.arity() != a.arity() {
        return Err(Error::ArityMismatch(y.arity(), a.arity()));
    }
    if y.degree() > a.degree() {
        return Err(Error::DegreeMismatch(format!(
            "contracting a {}-vector into a {}-form",
            y.degree(),
            a.degree()
        )));
    }
    let m = a.arity();
    let mut out = DiffForm::zero(m, a.degree() - y.degree());
    for (j, yc) in y.terms() {
        for (i, ac) in a.terms() {
            if !j.is_subset_of(*i) {
                continue;
            }
            // ι_{∂_{j_1}} acts first
            let mut rest = *i;
            let mut odd = false;
            for jj in j.indices() {
                odd ^= rest.count_below(jj) % 2 == 1;
                rest = rest.without(jj);
            }
            let c = yc.mul(ac);
            out.add_term(rest, if odd { c.neg() } else { c });
        }
    }
    Ok(out)
}

/// `ι_X a`.
pub fn contract(x: &VectorField, a: &DiffForm) -> Result<DiffForm> {
    if x.arity() != a.arity() {
        return Err(Error::ArityMismatch(x.arity(), a.arity()));
    }
    if a.degree() == 0 {
        return Err(Error::DegreeMismatch("contracting into a function".into()));
    }
    let m = a.arity();
    let mut out = DiffForm::zero(m, a.degree() - 1);
    for (i, ac) in a.terms() {
        for (pos, k) in i.indices().enumerate() {
            let xk = x.component(k);
            if xk.is_zero() {
                continue;
            }
            let c = xk.mul(ac);
            out.add_term(i.without(k), if pos % 2 == 1 { c.neg() } else { c });
        }
    }
    Ok(out)
}

/// `L_Y a = d ι_Y a - (-1)^k ι_Y d a` for a `k`-vector field `Y`.
pub fn lie_derivative(y: &MultiVectorField, a: &DiffForm) -> Result<DiffForm> {
    let first = if y.degree() <= a.degree() {
        interior_product(y, a)?.exterior_d()
    } else {
        DiffForm::zero(a.arity(), (a.degree() + 1).saturating_sub(y.degree()))
    };
    let da = a.exterior_d();
    let second = if y.degree() <= da.degree() {
        interior_product(y, &da)?
    } else {
        return Ok(first);
    };
    Ok(if y.degree() % 2 == 0 {
        first.sub(&second)
    } else {
        first.add(&second)
    })
}

/// `L_X a = d ι_X a + ι_X d a`.
pub fn lie_derivative_vf(x: &VectorField, a: &DiffForm) -> Result<DiffForm> {
    let da = a.exterior_d();
    let second = if da.degree() <= a.arity() { contract(x, &da)? } else { DiffForm::zero(a.arity(), a.degree()) };
    if a.degree() == 0 {
        return Ok(second);
    }
    Ok(contract(x, a)?.exterior_d().add(&second))
}

/// A vector field remembered as the fundamental field of a Lie algebra
/// element, so that brackets of tuples can be taken in the algebra.
#[derive(Clone, Debug)]
pub struct TaggedField {
    pub field: VectorField,
    pub tag: Option<MultiVector>,
}

impl TaggedField {
    pub fn fundamental(g: &LieAlgebra, xi: MultiVector) -> Result<Self> {
        let fields = fundamental_fields(g)?;
        Ok(TaggedField {
            field: fundamental_of_element(&fields, &xi)?,
            tag: Some(xi),
        })
    }

    pub fn untagged(field: VectorField) -> Self {
        TaggedField { field, tag: None }
    }
}

fn tags_wedge(xs: &[TaggedField]) -> Result<MultiVector> {
    let mut p = MultiVector::basis(Blade::EMPTY);
    for (pos, x) in xs.iter().enumerate() {
        let t = x.tag.as_ref().ok_or(Error::Untagged(pos))?;
        p = p.wedge(t);
    }
    Ok(p)
}

fn contract_all(xs: &[&VectorField], arity: usize, a: &DiffForm) -> Result<DiffForm> {
    interior_product(&MultiVectorField::wedge_all(arity, xs), a)
}

/// Left side minus right side of
/// `(-1)^m d ι(x_1..x_m) = ι(x_1..x_m) d + ι(∂(x_1..x_m)) + Σ_k (-1)^k ι(..x̂_k..) L_{x_k}`,
/// with `∂` taken in the Lie algebra through the tags.
pub fn multicartan_residual(g: &LieAlgebra, xs: &[TaggedField], a: &DiffForm) -> Result<DiffForm> {
    let k = xs.len();
    let m = a.arity();
    if k == 0 || k > a.degree() {
        return Err(Error::DegreeMismatch(format!("{k} fields against a {}-form", a.degree())));
    }
    let p = tags_wedge(xs)?;
    let fields = fundamental_fields(g)?;
    let all: Vec<&VectorField> = xs.iter().map(|x| &x.field).collect();
    let mut lhs = contract_all(&all, m, a)?.exterior_d();
    if k % 2 == 1 {
        lhs = lhs.neg();
    }
    let da = a.exterior_d();
    let mut rhs = if k <= da.degree() {
        contract_all(&all, m, &da)?
    } else {
        DiffForm::zero(m, a.degree() + 1 - k)
    };
    let dp = fundamental_multivector(&fields, &ce_boundary(g, &p))?;
    if !dp.is_zero() {
        rhs = rhs.add(&interior_product(&dp, a)?);
    }
    for i in 0..k {
        let rest: Vec<&VectorField> = all.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect();
        let lx = lie_derivative_vf(all[i], a)?;
        let term = contract_all(&rest, m, &lx)?;
        // (-1)^k with 1-based k = i + 1
        rhs = if i % 2 == 0 { rhs.sub(&term) } else { rhs.add(&term) };
    }
    Ok(lhs.sub(&rhs))
}

/// Left side minus right side of
/// `L_v ι(x_1..x_k) = ι([v, x_1..x_k]) + ι(x_1..x_k) L_v`.
pub fn iterated_cartan_residual(g: &LieAlgebra, v: &TaggedField, xs: &[TaggedField], a: &DiffForm) -> Result<DiffForm> {
    let m = a.arity();
    let vt = v.tag.as_ref().ok_or(Error::Untagged(0))?;
    let p = tags_wedge(xs).map_err(|e| match e {
        Error::Untagged(i) => Error::Untagged(i + 1),
        e => e,
    })?;
    let fields = fundamental_fields(g)?;
    let all: Vec<&VectorField> = xs.iter().map(|x| &x.field).collect();
    let lhs = lie_derivative_vf(&v.field, &contract_all(&all, m, a)?)?;
    let adj = fundamental_multivector(&fields, &adjoint_action_element(g, vt, &p))?;
    let mut rhs = contract_all(&all, m, &lie_derivative_vf(&v.field, a)?)?;
    if !adj.is_zero() {
        rhs = rhs.add(&interior_product(&adj, a)?);
    }
    Ok(lhs.sub(&rhs))
}

/// `ι(v_p) a` for `p ∈ Λ^k g`.
pub fn contract_element(fields: &[VectorField], p: &MultiVector, a: &DiffForm) -> Result<DiffForm> {
    if p.is_zero() {
        return Ok(DiffForm::zero(a.arity(), a.degree().saturating_sub(p.degree())));
    }
    interior_product(&fundamental_multivector(fields, p)?, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{qi, ExprCoeff};
    use crate::lie::{make_so, so_generator};

    #[test]
    fn contraction_order_convention() {
        let m = 2;
        let y = MultiVectorField::wedge_all(m, &[&VectorField::coordinate(m, 0), &VectorField::coordinate(m, 1)]);
        let r = interior_product(&y, &DiffForm::volume(m)).unwrap();
        assert_eq!(r.as_function(), ExprCoeff::one(m));
    }

    #[test]
    fn euler_contraction() {
        let m = 2;
        let r = contract(&VectorField::euler(m), &DiffForm::volume(m)).unwrap();
        let expect = DiffForm::dx(m, 1).mul_fn(&ExprCoeff::x(m, 0)).sub(&DiffForm::dx(m, 0).mul_fn(&ExprCoeff::x(m, 1)));
        assert_eq!(r, expect);
    }

    #[test]
    fn rotation_contraction() {
        // ι_{x²∂₃ - x³∂₂} dx¹²³ = x² dx¹∧dx² + x³ dx¹∧dx³ (1-based)
        let m = 3;
        let v = super::super::field::fundamental_vf(&so_generator(3, 2, 3));
        let r = contract(&v, &DiffForm::volume(m)).unwrap();
        let expect = DiffForm::basis(m, Blade::from_sorted(&[0, 1]))
            .mul_fn(&ExprCoeff::x(m, 1))
            .add(&DiffForm::basis(m, Blade::from_sorted(&[0, 2])).mul_fn(&ExprCoeff::x(m, 2)));
        assert_eq!(r, expect);
        let y = MultiVectorField::from_field(&v);
        assert_eq!(interior_product(&y, &DiffForm::volume(m)).unwrap(), expect);
    }

    #[test]
    fn euler_lie_derivatives() {
        for m in [3, 4] {
            let e = VectorField::euler(m);
            let vol = DiffForm::volume(m);
            assert_eq!(lie_derivative_vf(&e, &vol).unwrap(), vol.scale(&qi(m as i64)));
            let rho = DiffForm::function(ExprCoeff::big_r_pow(m, -(m as i32)));
            assert_eq!(lie_derivative_vf(&e, &rho).unwrap(), rho.scale(&qi(-(m as i64))));
            let y = MultiVectorField::from_field(&e);
            assert_eq!(lie_derivative(&y, &vol).unwrap(), vol.scale(&qi(m as i64)));
            let iv = contract(&e, &vol).unwrap();
            assert_eq!(iv.exterior_d(), vol.scale(&qi(m as i64)));
        }
    }

    #[test]
    fn multicartan_low_degree() {
        let g = make_so(3).unwrap();
        let a = DiffForm::volume(3);
        let lx = TaggedField::fundamental(&g, MultiVector::wedge_of(&[0])).unwrap();
        let ly = TaggedField::fundamental(&g, MultiVector::wedge_of(&[1])).unwrap();
        assert!(multicartan_residual(&g, &[lx.clone()], &a).unwrap().is_zero());
        assert!(multicartan_residual(&g, &[lx.clone(), ly.clone()], &a).unwrap().is_zero());
        let untagged = TaggedField::untagged(lx.field.clone());
        assert!(matches!(multicartan_residual(&g, &[lx, untagged], &a), Err(Error::Untagged(1))));
    }
}
