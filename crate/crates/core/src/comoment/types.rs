//! Comoment maps as tables of forms on basis wedges.

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::algebra::{Blade, Q};
use crate::error::{Error, Result};
use crate::forms::DiffForm;
use crate::lie::MultiVector;

/// `ς(k) = -(-1)^{k(k+1)/2}`.
pub fn koszul_sign(k: usize) -> i32 {
    if (k * (k + 1) / 2) % 2 == 0 {
        -1
    } else {
        1
    }
}

/// `(f_1, ..., f_K)` with `f_k(e_I)` a `(D-1-k)`-form for `|I| = k`.
/// `K = D-1` for a full comoment; smaller `K` stores a partial one whose
/// higher components are unknown.
#[derive(Clone, Debug)]
pub struct Comoment {
    arity: usize,
    plectic_degree: usize,
    components: Vec<BTreeMap<Blade, DiffForm>>,
}

impl Comoment {
    pub fn new(arity: usize, plectic_degree: usize, components: Vec<BTreeMap<Blade, DiffForm>>) -> Result<Self> {
        if components.len() + 1 > plectic_degree.max(1) {
            return Err(Error::DegreeMismatch(format!(
                "{} components for a form of degree {plectic_degree}",
                components.len()
            )));
        }
        for (k0, comp) in components.iter().enumerate() {
            let k = k0 + 1;
            for (b, f) in comp {
                if b.len() != k || f.degree() + 1 + k != plectic_degree || f.arity() != arity {
                    return Err(Error::DegreeMismatch(format!(
                        "component {k} on {:?} has degree {}, expected {}",
                        b.to_vec(),
                        f.degree(),
                        plectic_degree - 1 - k
                    )));
                }
            }
        }
        Ok(Comoment {
            arity,
            plectic_degree,
            components,
        })
    }

    pub fn zero(arity: usize, plectic_degree: usize) -> Self {
        Comoment {
            arity,
            plectic_degree,
            components: vec![BTreeMap::new(); plectic_degree.saturating_sub(1)],
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn plectic_degree(&self) -> usize {
        self.plectic_degree
    }

    /// Number of stored components `K`.
    pub fn stored(&self) -> usize {
        self.components.len()
    }

    pub fn is_complete(&self) -> bool {
        self.components.len() + 1 == self.plectic_degree.max(1)
    }

    fn zero_form(&self, k: usize) -> DiffForm {
        DiffForm::zero(self.arity, self.plectic_degree.saturating_sub(1 + k))
    }

    /// `f_k(e_I)`; `f_0 = f_D = 0`.
    pub fn component(&self, k: usize, b: Blade) -> DiffForm {
        if k == 0 || k > self.components.len() {
            return self.zero_form(k);
        }
        self.components[k - 1].get(&b).cloned().unwrap_or_else(|| self.zero_form(k))
    }

    pub fn component_map(&self, k: usize) -> Option<&BTreeMap<Blade, DiffForm>> {
        k.checked_sub(1).and_then(|i| self.components.get(i))
    }

    /// `f_k(p)` by linearity.
    pub fn apply(&self, k: usize, p: &MultiVector) -> DiffForm {
        let mut out = self.zero_form(k);
        if k == 0 || k >= self.plectic_degree {
            return out;
        }
        for (b, c) in p.terms() {
            let f = self.component(k, *b);
            if !f.is_zero() {
                out = out.add(&f.scale(c));
            }
        }
        out
    }

    /// Replaces one value, e.g. to perturb a comoment in tests.
    pub fn with_value(mut self, k: usize, b: Blade, f: DiffForm) -> Result<Self> {
        if k == 0 || k > self.components.len() || b.len() != k || f.degree() + 1 + k != self.plectic_degree {
            return Err(Error::DegreeMismatch(format!("no slot for component {k} on {:?}", b.to_vec())));
        }
        if f.is_zero() {
            self.components[k - 1].remove(&b);
        } else {
            self.components[k - 1].insert(b, f);
        }
        Ok(self)
    }

    /// Multiplies component `k` by `c`.
    pub fn scale_component(mut self, k: usize, c: &Q) -> Self {
        if let Some(comp) = self.components.get_mut(k.wrapping_sub(1)) {
            for f in comp.values_mut() {
                *f = f.scale(c);
            }
            comp.retain(|_, f| !f.is_zero());
        }
        self
    }
}

impl Serialize for Comoment {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            k: usize,
            tuple: Vec<usize>,
            form: &'a DiffForm,
        }
        let entries: Vec<Entry> = self
            .components
            .iter()
            .enumerate()
            .flat_map(|(k0, comp)| {
                comp.iter().map(move |(b, f)| Entry {
                    k: k0 + 1,
                    tuple: b.to_vec(),
                    form: f,
                })
            })
            .collect();
        let mut st = s.serialize_struct("Comoment", 3)?;
        st.serialize_field("plectic_degree", &self.plectic_degree)?;
        st.serialize_field("complete", &self.is_complete())?;
        st.serialize_field("components", &entries)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_signs() {
        let s: Vec<i32> = (1..=6).map(koszul_sign).collect();
        assert_eq!(s, vec![1, 1, -1, -1, 1, 1]);
    }

    #[test]
    fn boundary_components_are_zero() {
        let f = Comoment::zero(3, 3);
        assert!(f.component(0, Blade::EMPTY).is_zero());
        assert_eq!(f.component(0, Blade::EMPTY).degree(), 2);
        assert!(f.component(3, Blade::from_sorted(&[0, 1, 2])).is_zero());
        assert!(f.is_complete());
    }
}
