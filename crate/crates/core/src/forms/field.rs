//! Vector fields and multivector fields on `R^m`.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::algebra::{Blade, ExprCoeff, QMatrix, Q};
use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, MultiVector};

#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    comps: Vec<ExprCoeff>,
}

impl VectorField {
    pub fn zero(arity: usize) -> Self {
        VectorField {
            comps: vec![ExprCoeff::zero(arity); arity],
        }
    }

    pub fn from_components(comps: Vec<ExprCoeff>) -> Result<Self> {
        let m = comps.len();
        if let Some(c) = comps.iter().find(|c| c.arity() != m) {
            return Err(Error::ArityMismatch(c.arity(), m));
        }
        Ok(VectorField { comps })
    }

    /// `∂_i`.
    pub fn coordinate(arity: usize, i: usize) -> Self {
        let mut v = VectorField::zero(arity);
        v.comps[i] = ExprCoeff::one(arity);
        v
    }

    /// `E = Σ x^i ∂_i`.
    pub fn euler(arity: usize) -> Self {
        fundamental_vf(&QMatrix::identity(arity))
    }

    pub fn arity(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, i: usize) -> &ExprCoeff {
        &self.comps[i]
    }

    pub fn components(&self) -> &[ExprCoeff] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(ExprCoeff::is_zero)
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> VectorField {
        VectorField {
            comps: self.comps.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// `X(f) = Σ X^i ∂_i f`.
    pub fn apply(&self, f: &ExprCoeff) -> ExprCoeff {
        let mut out = ExprCoeff::zero(self.arity());
        for (i, xi) in self.comps.iter().enumerate() {
            if !xi.is_zero() {
                out = out.add(&xi.mul(&f.partial(i)));
            }
        }
        out
    }

    /// `[X, Y]^i = X(Y^i) - Y(X^i)`.
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        VectorField {
            comps: (0..self.arity())
                .map(|i| self.apply(&other.comps[i]).sub(&other.apply(&self.comps[i])))
                .collect(),
        }
    }
}

/// The linear field `v_A = Σ_{i,j} A_ji x^j ∂_i`, i.e. `(Aᵀx)^i ∂_i`.
///
/// With this transpose `A ↦ v_A` is a Lie algebra homomorphism for the
/// matrix commutator, `[v_A, v_B] = v_{[A,B]}`, and on the skew basis
/// `A_ab` it gives `v = ±(x^a ∂_b - x^b ∂_a)`.
pub fn fundamental_vf(a: &QMatrix) -> VectorField {
    let m = a.size();
    let mut comps = vec![ExprCoeff::zero(m); m];
    for (j, i, v) in a.nonzero_entries() {
        comps[i] = comps[i].add(&ExprCoeff::x(m, j).scale(v));
    }
    VectorField { comps }
}

/// `v_{e_i}` for every basis element of a matrix Lie algebra.
pub fn fundamental_fields(g: &LieAlgebra) -> Result<Vec<VectorField>> {
    let rep = g.representation().ok_or(Error::NoRepresentation)?;
    Ok(rep.iter().map(fundamental_vf).collect())
}

/// `v_ξ` for a degree-1 element `ξ`.
pub fn fundamental_of_element(fields: &[VectorField], xi: &MultiVector) -> Result<VectorField> {
    let m = fields.first().map(VectorField::arity).ok_or(Error::NoRepresentation)?;
    if xi.degree() != 1 {
        return Err(Error::DegreeMismatch(format!("expected a degree-1 element, got degree {}", xi.degree())));
    }
    let mut v = VectorField::zero(m);
    for (b, c) in xi.terms() {
        let i = b.indices().next().unwrap();
        let f = fields.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            arity: fields.len(),
        })?;
        v = v.add(&f.scale(c));
    }
    Ok(v)
}

/// Multivector field in the coordinate basis `∂_J = ∂_{j_1} ∧ ... ∧ ∂_{j_k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiVectorField {
    arity: usize,
    degree: usize,
    terms: BTreeMap<Blade, ExprCoeff>,
}

impl MultiVectorField {
    pub fn zero(arity: usize, degree: usize) -> Self {
        MultiVectorField {
            arity,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The constant 0-vector `1`.
    pub fn unit(arity: usize) -> Self {
        let mut y = MultiVectorField::zero(arity, 0);
        y.terms.insert(Blade::EMPTY, ExprCoeff::one(arity));
        y
    }

    pub fn from_field(v: &VectorField) -> Self {
        MultiVectorField::unit(v.arity()).wedge_field(v)
    }

    /// `v_1 ∧ ... ∧ v_k`.
    pub fn wedge_all(arity: usize, fields: &[&VectorField]) -> Self {
        fields
            .iter()
            .fold(MultiVectorField::unit(arity), |acc, v| acc.wedge_field(v))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &ExprCoeff)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, b: Blade, c: ExprCoeff) {
        if c.is_zero() {
            return;
        }
        let s = match self.terms.remove(&b) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !s.is_zero() {
            self.terms.insert(b, s);
        }
    }

    /// `self ∧ v`.
    pub fn wedge_field(&self, v: &VectorField) -> Self {
        assert_eq!(self.arity, v.arity(), "arity mismatch");
        let mut out = MultiVectorField::zero(self.arity, self.degree + 1);
        for (b, c) in &self.terms {
            for (i, vi) in v.components().iter().enumerate() {
                if vi.is_zero() {
                    continue;
                }
                if let Some((s, bi)) = b.wedge(Blade::single(i)) {
                    let t = c.mul(vi);
                    out.add_term(bi, if s < 0 { t.neg() } else { t });
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = MultiVectorField::zero(self.arity, self.degree);
        for (b, v) in &self.terms {
            out.add_term(*b, v.scale(c));
        }
        out
    }
}

/// `v_p` for `p ∈ Λ^k g`, extending `e_I ↦ v_{i_1} ∧ ... ∧ v_{i_k}` linearly.
pub fn fundamental_multivector(fields: &[VectorField], p: &MultiVector) -> Result<MultiVectorField> {
    let m = fields.first().map(VectorField::arity).ok_or(Error::NoRepresentation)?;
    let mut out = MultiVectorField::zero(m, p.degree());
    for (b, c) in p.terms() {
        let fs: Vec<&VectorField> = b
            .indices()
            .map(|i| {
                fields.get(i).ok_or(Error::IndexOutOfRange {
                    index: i,
                    arity: fields.len(),
                })
            })
            .collect::<Result<_>>()?;
        out = out.add(&MultiVectorField::wedge_all(m, &fs).scale(c));
    }
    Ok(out)
}

impl Serialize for VectorField {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.comps.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}
