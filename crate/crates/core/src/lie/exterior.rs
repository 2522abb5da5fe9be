//! Sparse homogeneous elements of `Λ^k g` and `Λ^k g*`.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::algebra::{fmt_q, Blade, Q};
use crate::error::{Error, Result};

pub trait Kind: Clone + fmt::Debug + PartialEq + Eq {
    const NAME: &'static str;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chains;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochains;

impl Kind for Chains {
    const NAME: &'static str = "multivector";
}

impl Kind for Cochains {
    const NAME: &'static str = "cochain";
}

/// Homogeneous element of degree `k` in the basis `e_I`, `|I| = k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exterior<K: Kind> {
    degree: usize,
    terms: BTreeMap<Blade, Q>,
    _kind: PhantomData<K>,
}

pub type MultiVector = Exterior<Chains>;
pub type Cochain = Exterior<Cochains>;

impl<K: Kind> Exterior<K> {
    pub fn zero(degree: usize) -> Self {
        Exterior {
            degree,
            terms: BTreeMap::new(),
            _kind: PhantomData,
        }
    }

    pub fn basis(b: Blade) -> Self {
        let mut e = Self::zero(b.len());
        e.terms.insert(b, Q::from_integer(1.into()));
        e
    }

    /// `e_{i_1} ∧ ... ∧ e_{i_k}` for indices in any order.
    pub fn wedge_of(indices: &[usize]) -> Self {
        match Blade::from_unsorted(indices) {
            Some((s, b)) => Self::basis(b).scale(&Q::from_integer(s.into())),
            None => Self::zero(indices.len()),
        }
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (Blade, Q)>) -> Result<Self> {
        let mut e = Self::zero(degree);
        for (b, c) in terms {
            if b.len() != degree {
                return Err(Error::DegreeMismatch(format!(
                    "{} of degree {degree} given a term of degree {}",
                    K::NAME,
                    b.len()
                )));
            }
            e.add_term(b, c);
        }
        Ok(e)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &Q)> {
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

    pub fn coefficient(&self, b: Blade) -> Q {
        self.terms.get(&b).cloned().unwrap_or_else(Q::zero)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.terms.keys().filter_map(|b| b.max_index()).max()
    }

    pub fn add_term(&mut self, b: Blade, c: Q) {
        debug_assert_eq!(b.len(), self.degree);
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(b).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::from_integer(1.into()))
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.degree);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(b, v)| (*b, v * c)).collect();
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((s, ab)) = a.wedge(*b) {
                    out.add_term(ab, ca * cb * Q::from_integer(s.into()));
                }
            }
        }
        out
    }
}

impl Cochain {
    /// Pairing `c(p)` with a multivector of the same degree.
    pub fn pair(&self, p: &MultiVector) -> Q {
        p.terms()
            .map(|(b, v)| v * self.coefficient(*b))
            .sum()
    }
}

impl<K: Kind> fmt::Display for Exterior<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| {
                let idx: Vec<String> = b.indices().map(|i| i.to_string()).collect();
                format!("{}*e[{}]", fmt_q(c), idx.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<K: Kind> Serialize for Exterior<K> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(Vec<usize>, String)> =
            self.terms.iter().map(|(b, c)| (b.to_vec(), fmt_q(c))).collect();
        let mut st = s.serialize_struct("Exterior", 2)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::qi;

    #[test]
    fn wedge_is_alternating() {
        let a = MultiVector::wedge_of(&[0]);
        let b = MultiVector::wedge_of(&[1]);
        assert_eq!(a.wedge(&b), b.wedge(&a).neg());
        assert!(a.wedge(&a).is_zero());
        assert_eq!(MultiVector::wedge_of(&[2, 0, 1]), MultiVector::wedge_of(&[0, 1, 2]));
        assert_eq!(MultiVector::wedge_of(&[1, 0]).coefficient(Blade::from_sorted(&[0, 1])), qi(-1));
    }

    #[test]
    fn degree_is_checked() {
        let r = Cochain::from_terms(2, [(Blade::single(0), qi(1))]);
        assert!(matches!(r, Err(Error::DegreeMismatch(_))));
    }
}
