//! The Chevalley–Eilenberg complex of a Lie algebra with trivial
//! coefficients.
//!
//! `∂(ξ_1 ∧ ... ∧ ξ_k) = Σ_{i<j} (-1)^{i+j} [ξ_i, ξ_j] ∧ ξ_1 ∧ ..^i..^j.. ∧ ξ_k`
//! and `δc = c ∘ ∂`.

use std::collections::HashMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{binomial, blades, Blade, SparseMatrix, Q};
use crate::error::{Error, Result};

use super::algebra::LieAlgebra;
use super::exterior::{Cochain, MultiVector};

pub const DEFAULT_MAX_DIM: usize = 10_000;
pub const MAX_DIM_ENV: &str = "MSK_MAX_DIM";

/// Upper bound on `dim Λ^k g` for any exact elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_dim: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_dim: DEFAULT_MAX_DIM,
        }
    }
}

impl Caps {
    /// Defaults, overridden by `MSK_MAX_DIM` when it parses.
    pub fn from_env() -> Result<Self> {
        match std::env::var(MAX_DIM_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map(|max_dim| Caps { max_dim })
                .map_err(|_| Error::InvalidConfig(format!("{MAX_DIM_ENV}={v:?} is not a count"))),
            Err(_) => Ok(Caps::default()),
        }
    }

    pub fn check(&self, what: &str, d: usize, k: usize) -> Result<()> {
        let needed = binomial(d, k);
        if needed > self.max_dim as u128 {
            Err(Error::CapExceeded {
                what: format!("{what} (Λ^{k} of a {d}-dimensional algebra)"),
                needed,
                cap: self.max_dim,
            })
        } else {
            Ok(())
        }
    }
}

/// `∂ e_I` for a basis blade.
pub fn boundary_of_blade(g: &LieAlgebra, blade: Blade) -> MultiVector {
    let idx = blade.to_vec();
    let k = idx.len();
    let mut out = MultiVector::zero(k.saturating_sub(1));
    if k < 2 {
        return out;
    }
    for a in 0..k {
        for b in a + 1..k {
            let br = g.bracket(idx[a], idx[b]);
            if br.is_empty() {
                continue;
            }
            // 1-based positions a+1, b+1
            let sign = if (a + b) % 2 == 0 { 1 } else { -1 };
            let rest = blade.without(idx[a]).without(idx[b]);
            for (m, c) in br {
                if let Some((s, res)) = Blade::single(m).wedge(rest) {
                    out.add_term(res, c * Q::from_integer((sign * s).into()));
                }
            }
        }
    }
    out
}

pub fn ce_boundary(g: &LieAlgebra, p: &MultiVector) -> MultiVector {
    let mut out = MultiVector::zero(p.degree().saturating_sub(1));
    for (b, c) in p.terms() {
        out = out.add(&boundary_of_blade(g, *b).scale(c));
    }
    out
}

/// `(δc)(e_J) = c(∂ e_J)` over all `(k+1)`-blades `J`.
pub fn ce_differential(g: &LieAlgebra, c: &Cochain) -> Cochain {
    let k = c.degree();
    let mut out = Cochain::zero(k + 1);
    if c.is_zero() {
        return out;
    }
    let d = g.dim();
    let vals: Vec<(Blade, Q)> = blades(d, k + 1)
        .into_par_iter()
        .filter_map(|j| {
            let v: Q = boundary_of_blade(g, j)
                .terms()
                .map(|(i, x)| x * c.coefficient(*i))
                .sum();
            (!v.is_zero()).then_some((j, v))
        })
        .collect();
    for (j, v) in vals {
        out.add_term(j, v);
    }
    out
}

/// `[e_i, x_1 ∧ ... ∧ x_k] = Σ_l x_1 ∧ ... ∧ [e_i, x_l] ∧ ... ∧ x_k`,
/// the derivation extending the adjoint action.
pub fn adjoint_action(g: &LieAlgebra, xi: usize, b: &MultiVector) -> MultiVector {
    let mut out = MultiVector::zero(b.degree());
    for (blade, c) in b.terms() {
        let idx = blade.to_vec();
        for (pos, &i) in idx.iter().enumerate() {
            for (m, cm) in g.bracket(xi, i) {
                let mut rep = idx.clone();
                rep[pos] = m;
                if let Some((s, res)) = Blade::from_unsorted(&rep) {
                    out.add_term(res, c * cm * Q::from_integer(s.into()));
                }
            }
        }
    }
    out
}

/// Adjoint action of a general degree-1 element.
pub fn adjoint_action_element(g: &LieAlgebra, xi: &MultiVector, b: &MultiVector) -> MultiVector {
    let mut out = MultiVector::zero(b.degree());
    for (e, c) in xi.terms() {
        let i = e.indices().next().expect("degree-1 element");
        out = out.add(&adjoint_action(g, i, b).scale(c));
    }
    out
}

/// Basis of `Λ^k g` with a reverse index.
pub struct GradedBasis {
    pub blades: Vec<Blade>,
    pub index: HashMap<Blade, usize>,
}

impl GradedBasis {
    pub fn new(d: usize, k: usize) -> Self {
        let blades = blades(d, k);
        let index = blades.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        GradedBasis { blades, index }
    }

    pub fn len(&self) -> usize {
        self.blades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blades.is_empty()
    }
}

/// Matrix of `∂_k : Λ^k g → Λ^{k-1} g` (rows `Λ^{k-1}`, columns `Λ^k`).
pub fn boundary_matrix(g: &LieAlgebra, k: usize, caps: &Caps) -> Result<SparseMatrix> {
    let d = g.dim();
    caps.check("boundary source", d, k)?;
    if k == 0 {
        return Ok(SparseMatrix::zeros(0, 1));
    }
    caps.check("boundary target", d, k - 1)?;
    let src = GradedBasis::new(d, k);
    let dst = GradedBasis::new(d, k - 1);
    let cols: Vec<MultiVector> = src.blades.par_iter().map(|b| boundary_of_blade(g, *b)).collect();
    let mut m = SparseMatrix::zeros(dst.len(), src.len());
    for (j, col) in cols.iter().enumerate() {
        for (b, c) in col.terms() {
            m.add_to(dst.index[b], j, c.clone());
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub degree: usize,
    pub dim_chains: usize,
    pub dim_cycles: usize,
    pub dim_boundaries: usize,
    pub dim_homology: usize,
}

fn boundary_rank(g: &LieAlgebra, k: usize, caps: &Caps) -> Result<usize> {
    if k == 0 || k > g.dim() {
        return Ok(0);
    }
    Ok(boundary_matrix(g, k, caps)?.rank())
}

pub fn homology(g: &LieAlgebra, k: usize, caps: &Caps) -> Result<HomologyReport> {
    let d = g.dim();
    if k > d {
        return Err(Error::DegreeMismatch(format!("degree {k} exceeds dim {d}")));
    }
    caps.check("homology", d, k)?;
    if k < d {
        caps.check("homology", d, k + 1)?;
    }
    let (rk, rk1) = rayon::join(|| boundary_rank(g, k, caps), || boundary_rank(g, k + 1, caps));
    let (rk, rk1) = (rk?, rk1?);
    let chains = binomial(d, k) as usize;
    let cycles = chains - rk;
    Ok(HomologyReport {
        degree: k,
        dim_chains: chains,
        dim_cycles: cycles,
        dim_boundaries: rk1,
        dim_homology: cycles - rk1,
    })
}

fn to_dense(basis: &GradedBasis, terms: impl Iterator<Item = (Blade, Q)>) -> Vec<Q> {
    let mut v = vec![Q::zero(); basis.len()];
    for (b, c) in terms {
        v[basis.index[&b]] = c;
    }
    v
}

fn from_dense<K: super::exterior::Kind>(basis: &GradedBasis, k: usize, v: Vec<Q>) -> super::exterior::Exterior<K> {
    let terms = basis.blades.iter().copied().zip(v).filter(|(_, c)| !c.is_zero());
    super::exterior::Exterior::from_terms(k, terms).expect("basis blades have the right degree")
}

/// Some `q` with `∂q = p`, or `None` when `p` is not a boundary.
pub fn find_primitive(g: &LieAlgebra, p: &MultiVector, caps: &Caps) -> Result<Option<MultiVector>> {
    let k = p.degree();
    let d = g.dim();
    if p.is_zero() {
        return Ok(Some(MultiVector::zero(k + 1)));
    }
    if k + 1 > d {
        return Ok(None);
    }
    let m = boundary_matrix(g, k + 1, caps)?;
    let dst = GradedBasis::new(d, k);
    let rhs = to_dense(&dst, p.terms().map(|(b, c)| (*b, c.clone())));
    let src = GradedBasis::new(d, k + 1);
    Ok(m.solve(&rhs)?.map(|x| from_dense(&src, k + 1, x)))
}

/// Some `b` with `δb = c`, or `None` when the class of `c` is nonzero.
pub fn is_coboundary(g: &LieAlgebra, c: &Cochain, caps: &Caps) -> Result<Option<Cochain>> {
    let k = c.degree();
    let d = g.dim();
    caps.check("cocycle", d, k)?;
    let dc = ce_differential(g, c);
    if !dc.is_zero() {
        return Err(Error::NotACocycle(dc.len()));
    }
    if c.is_zero() {
        return Ok(Some(Cochain::zero(k.saturating_sub(1))));
    }
    if k == 0 {
        return Ok(None);
    }
    // δb = c reads ∂_kᵀ b = c
    let mt = boundary_matrix(g, k, caps)?.transpose();
    let src = GradedBasis::new(d, k);
    let rhs = to_dense(&src, c.terms().map(|(b, v)| (*b, v.clone())));
    let dst = GradedBasis::new(d, k - 1);
    Ok(mt.solve(&rhs)?.map(|x| from_dense(&dst, k - 1, x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::qi;
    use crate::lie::algebra::{make_so, make_su_realified};

    fn e(i: &[usize]) -> MultiVector {
        MultiVector::wedge_of(i)
    }

    #[test]
    fn so3_boundary_examples() {
        let g = make_so(3).unwrap();
        assert_eq!(ce_boundary(&g, &e(&[0, 1])), e(&[2]).neg());
        assert!(ce_boundary(&g, &e(&[1])).is_zero());
        let g4 = make_so(4).unwrap();
        // A12 = 0, A34 = 5
        assert!(ce_boundary(&g4, &e(&[0, 5])).is_zero());
    }

    #[test]
    fn boundary_matrix_rank_so3() {
        let g = make_so(3).unwrap();
        assert_eq!(boundary_matrix(&g, 2, &Caps::default()).unwrap().rank(), 3);
    }

    #[test]
    fn differential_example() {
        let g = make_so(3).unwrap();
        let lz = Cochain::basis(Blade::single(2));
        let dc = ce_differential(&g, &lz);
        assert_eq!(dc.coefficient(Blade::from_sorted(&[0, 1])), qi(-1));
        assert!(ce_differential(&g, &Cochain::zero(1)).is_zero());
    }

    #[test]
    fn adjoint_examples() {
        let g = make_so(3).unwrap();
        // [l_z, l_x] = l_y
        assert_eq!(adjoint_action(&g, 2, &e(&[0])), e(&[1]));
        let g4 = make_so(4).unwrap();
        assert!(adjoint_action(&g4, 0, &e(&[0, 5])).is_zero());
    }

    #[test]
    fn primitives_and_coboundaries() {
        let g = make_so(3).unwrap();
        let caps = Caps::default();
        let q = find_primitive(&g, &e(&[2]), &caps).unwrap().unwrap();
        assert_eq!(ce_boundary(&g, &q), e(&[2]));
        assert_eq!(q, e(&[0, 1]).neg());
        assert_eq!(find_primitive(&g, &MultiVector::zero(1), &caps).unwrap(), Some(MultiVector::zero(2)));
        let su2 = make_su_realified(2).unwrap();
        let top = Cochain::basis(Blade::from_sorted(&[0, 1, 2]));
        assert_eq!(is_coboundary(&su2, &top, &caps).unwrap(), None);
        let not_closed = Cochain::basis(Blade::single(0));
        assert!(matches!(is_coboundary(&g, &not_closed, &caps), Err(Error::NotACocycle(_))));
    }

    #[test]
    fn caps_are_enforced() {
        let g = make_so(6).unwrap();
        let caps = Caps { max_dim: 100 };
        assert!(matches!(homology(&g, 3, &caps), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn so3_homology() {
        let g = make_so(3).unwrap();
        let dims: Vec<usize> = (0..=3).map(|k| homology(&g, k, &Caps::default()).unwrap().dim_homology).collect();
        assert_eq!(dims, vec![1, 0, 0, 1]);
    }
}
