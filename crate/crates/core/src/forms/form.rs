//! Differential forms on `R^m` with coefficients in [`ExprCoeff`].

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::algebra::{blades, Blade, ExprCoeff, Q};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct DiffForm {
    arity: usize,
    degree: usize,
    terms: BTreeMap<Blade, ExprCoeff>,
}

impl DiffForm {
    pub fn zero(arity: usize, degree: usize) -> Self {
        DiffForm {
            arity,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// `dx^I` with unit coefficient.
    pub fn basis(arity: usize, b: Blade) -> Self {
        let mut f = DiffForm::zero(arity, b.len());
        f.add_term(b, ExprCoeff::one(arity));
        f
    }

    /// `dx^i`.
    pub fn dx(arity: usize, i: usize) -> Self {
        DiffForm::basis(arity, Blade::single(i))
    }

    /// `dx^from ∧ ... ∧ dx^{m-1}`.
    pub fn volume_from(arity: usize, from: usize) -> Self {
        DiffForm::basis(arity, Blade::from_sorted(&(from..arity).collect::<Vec<_>>()))
    }

    /// `dx^0 ∧ ... ∧ dx^{m-1}`.
    pub fn volume(arity: usize) -> Self {
        DiffForm::volume_from(arity, 0)
    }

    pub fn function(f: ExprCoeff) -> Self {
        let mut out = DiffForm::zero(f.arity(), 0);
        out.add_term(Blade::EMPTY, f);
        out
    }

    /// Constant-coefficient form from signed index triples and the like.
    pub fn constant<const K: usize>(arity: usize, terms: &[([usize; K], i64)]) -> Self {
        let mut f = DiffForm::zero(arity, K);
        for (idx, c) in terms {
            if let Some((s, b)) = Blade::from_unsorted(idx) {
                f.add_term(b, ExprCoeff::constant(arity, Q::from_integer((s as i64 * c).into())));
            }
        }
        f
    }

    pub fn from_terms(arity: usize, degree: usize, terms: impl IntoIterator<Item = (Blade, ExprCoeff)>) -> Result<Self> {
        let mut f = DiffForm::zero(arity, degree);
        for (b, c) in terms {
            if b.len() != degree {
                return Err(Error::DegreeMismatch(format!("term of degree {} in a {degree}-form", b.len())));
            }
            if c.arity() != arity || b.max_index().is_some_and(|i| i >= arity) {
                return Err(Error::ArityMismatch(c.arity(), arity));
            }
            f.add_term(b, c);
        }
        Ok(f)
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

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, b: Blade) -> ExprCoeff {
        self.terms.get(&b).cloned().unwrap_or_else(|| ExprCoeff::zero(self.arity))
    }

    /// The coefficient of a 0-form.
    pub fn as_function(&self) -> ExprCoeff {
        self.coefficient(Blade::EMPTY)
    }

    pub fn is_tau_free(&self) -> bool {
        self.terms.values().all(ExprCoeff::is_tau_free)
    }

    pub fn add_term(&mut self, b: Blade, c: ExprCoeff) {
        debug_assert_eq!(b.len(), self.degree);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(b) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check(&self, other: &DiffForm) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch(self.arity, other.arity));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &DiffForm) -> Result<DiffForm> {
        self.check(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(format!("adding a {}-form to a {}-form", other.degree, self.degree)));
        }
        Ok(self.add(other))
    }

    /// Panics on mismatched arity or degree; see [`DiffForm::checked_add`].
    pub fn add(&self, other: &DiffForm) -> DiffForm {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        out
    }

    pub fn neg(&self) -> DiffForm {
        DiffForm {
            arity: self.arity,
            degree: self.degree,
            terms: self.terms.iter().map(|(b, c)| (*b, c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &DiffForm) -> DiffForm {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> DiffForm {
        let mut out = DiffForm::zero(self.arity, self.degree);
        for (b, v) in &self.terms {
            out.add_term(*b, v.scale(c));
        }
        out
    }

    /// Multiplication by a function.
    pub fn mul_fn(&self, f: &ExprCoeff) -> DiffForm {
        let mut out = DiffForm::zero(self.arity, self.degree);
        for (b, v) in &self.terms {
            out.add_term(*b, v.mul(f));
        }
        out
    }

    pub fn wedge(&self, other: &DiffForm) -> Result<DiffForm> {
        self.check(other)?;
        let mut out = DiffForm::zero(self.arity, self.degree + other.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((s, ab)) = a.wedge(*b) {
                    let c = ca.mul(cb);
                    out.add_term(ab, if s < 0 { c.neg() } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn exterior_d(&self) -> DiffForm {
        let mut out = DiffForm::zero(self.arity, self.degree + 1);
        for (b, c) in &self.terms {
            for i in 0..self.arity {
                if b.contains(i) {
                    continue;
                }
                let di = c.partial(i);
                if di.is_zero() {
                    continue;
                }
                // dx^i ∧ dx^I
                let (s, ib) = Blade::single(i).wedge(*b).unwrap();
                out.add_term(ib, if s < 0 { di.neg() } else { di });
            }
        }
        out
    }

    /// Number of basis `q`-forms, for sizing dense representations.
    pub fn basis_size(&self) -> usize {
        blades(self.arity, self.degree).len()
    }
}

impl PartialEq for DiffForm {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.degree == other.degree && self.sub(other).is_zero()
    }
}

fn fmt_blade(b: &Blade) -> String {
    if b.is_empty() {
        return "1".into();
    }
    b.indices().map(|i| format!("dx{i}")).collect::<Vec<_>>().join("^")
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| {
                if b.is_empty() {
                    c.to_string()
                } else {
                    format!("({c}) {}", fmt_blade(b))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for DiffForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(Vec<usize>, String)> = self.terms.iter().map(|(b, c)| (b.to_vec(), c.to_string())).collect();
        terms.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::qi;

    #[test]
    fn d_examples() {
        let m = 3;
        let f = DiffForm::dx(m, 1).mul_fn(&ExprCoeff::x(m, 0));
        assert_eq!(f.exterior_d(), DiffForm::basis(m, Blade::from_sorted(&[0, 1])));
        assert!(DiffForm::volume(m).exterior_d().is_zero());
    }

    #[test]
    fn wedge_graded_commutative() {
        let m = 4;
        let a = DiffForm::dx(m, 0).mul_fn(&ExprCoeff::x(m, 2));
        let b = DiffForm::dx(m, 1).wedge(&DiffForm::dx(m, 3)).unwrap().mul_fn(&ExprCoeff::r(m));
        assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap());
        let c = DiffForm::dx(m, 2);
        assert_eq!(a.wedge(&c).unwrap(), c.wedge(&a).unwrap().neg());
        assert!(a.wedge(&DiffForm::dx(3, 0)).is_err());
    }

    #[test]
    fn constant_forms_sort_their_indices() {
        let f = DiffForm::constant(3, &[([1, 0, 2], 1)]);
        assert_eq!(f.coefficient(Blade::from_sorted(&[0, 1, 2])).constant_value(), Some(qi(-1)));
    }

    #[test]
    fn display_is_stable() {
        let m = 3;
        let f = DiffForm::dx(m, 1).mul_fn(&ExprCoeff::x(m, 0)).sub(&DiffForm::dx(m, 0).mul_fn(&ExprCoeff::x(m, 1)));
        assert_eq!(f.to_string(), "(-x1) dx0 + (x0) dx1");
    }
}
