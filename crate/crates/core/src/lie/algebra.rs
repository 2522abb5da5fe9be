//! Finite-dimensional Lie algebras given by structure constants, and the
//! matrix algebras used as symmetry algebras of spheres.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::algebra::matrix::decompose;
use crate::algebra::{fmt_q, qi, Blade, QMatrix, SparseMatrix, SparseVec, Q};
use crate::error::{Error, Result};

use super::exterior::MultiVector;

/// A Lie algebra with basis `e_0..e_{d-1}` and `[e_i, e_j] = c_ij^k e_k`.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    name: String,
    labels: Vec<String>,
    // only i < j is stored
    brackets: BTreeMap<(usize, usize), Vec<(usize, Q)>>,
    representation: Option<Vec<QMatrix>>,
}

impl LieAlgebra {
    /// Builds an algebra from structure constants, listing `[e_i, e_j]` for
    /// `i < j` (missing pairs commute).
    pub fn from_structure_constants(
        name: impl Into<String>,
        labels: Vec<String>,
        brackets: BTreeMap<(usize, usize), Vec<(usize, Q)>>,
    ) -> Result<Self> {
        let d = labels.len();
        for (&(i, j), v) in &brackets {
            if i >= j || j >= d || v.iter().any(|(k, _)| *k >= d) {
                return Err(Error::DimensionMismatch(format!("bad structure constant entry ({i}, {j})")));
            }
        }
        let brackets = brackets
            .into_iter()
            .map(|(k, v)| (k, v.into_iter().filter(|(_, c)| !c.is_zero()).collect::<Vec<_>>()))
            .filter(|(_, v)| !v.is_empty())
            .collect();
        Ok(LieAlgebra {
            name: name.into(),
            labels,
            brackets,
            representation: None,
        })
    }

    /// Matrix Lie algebra spanned by linearly independent matrices closed
    /// under the commutator. Structure constants are read off from
    /// `[A_i, A_j] = A_i A_j - A_j A_i`.
    pub fn from_matrices(name: impl Into<String>, labels: Vec<String>, mats: Vec<QMatrix>) -> Result<Self> {
        if labels.len() != mats.len() {
            return Err(Error::DimensionMismatch("one label per matrix".into()));
        }
        let Some(m) = mats.first().map(QMatrix::size) else {
            return LieAlgebra::from_structure_constants(name, labels, BTreeMap::new());
        };
        if mats.iter().any(|a| a.size() != m) {
            return Err(Error::DimensionMismatch("matrices differ in size".into()));
        }
        let flat: Vec<Vec<Q>> = mats.iter().map(|a| a.entries().to_vec()).collect();
        let rows: Vec<SparseVec> = flat
            .iter()
            .map(|v| v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c.clone())).collect())
            .collect();
        if SparseMatrix::from_rows(m * m, rows).rank() != mats.len() {
            return Err(Error::Degenerate("matrices are linearly dependent".into()));
        }
        let mut brackets = BTreeMap::new();
        for i in 0..mats.len() {
            for j in i + 1..mats.len() {
                let c = mats[i].commutator(&mats[j]);
                if c.is_zero() {
                    continue;
                }
                let coords = decompose(&flat, c.entries())?.ok_or_else(|| {
                    Error::NotClosed(format!("[{}, {}] leaves the span", labels[i], labels[j]))
                })?;
                let v: Vec<(usize, Q)> = coords.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
                brackets.insert((i, j), v);
            }
        }
        let mut g = LieAlgebra::from_structure_constants(name, labels, brackets)?;
        g.representation = Some(mats);
        Ok(g)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn representation(&self) -> Option<&[QMatrix]> {
        self.representation.as_deref()
    }

    pub fn matrix(&self, i: usize) -> Result<&QMatrix> {
        self.representation
            .as_ref()
            .map(|r| &r[i])
            .ok_or(Error::NoRepresentation)
    }

    /// Size `m` of the representing matrices.
    pub fn rep_size(&self) -> Option<usize> {
        self.representation.as_ref().and_then(|r| r.first()).map(QMatrix::size)
    }

    /// `[e_i, e_j]` as sparse coordinates.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<(usize, Q)> {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => Vec::new(),
            Less => self.brackets.get(&(i, j)).cloned().unwrap_or_default(),
            Greater => self
                .brackets
                .get(&(j, i))
                .map(|v| v.iter().map(|(k, c)| (*k, -c)).collect())
                .unwrap_or_default(),
        }
    }

    /// Bracket of two degree-1 elements.
    pub fn bracket_elements(&self, a: &MultiVector, b: &MultiVector) -> MultiVector {
        let mut out = MultiVector::zero(1);
        for (x, cx) in a.terms() {
            for (y, cy) in b.terms() {
                let (i, j) = (x.indices().next().unwrap(), y.indices().next().unwrap());
                for (k, c) in self.bracket(i, j) {
                    out.add_term(Blade::single(k), c * cx * cy);
                }
            }
        }
        out
    }

    /// Number of nonzero coefficients in the Jacobiator over all basis
    /// triples; zero for a genuine Lie algebra.
    pub fn jacobi_residual(&self) -> usize {
        let d = self.dim();
        let br = |u: &BTreeMap<usize, Q>, j: usize| {
            let mut out: BTreeMap<usize, Q> = BTreeMap::new();
            for (&m, c) in u {
                for (l, c2) in self.bracket(m, j) {
                    *out.entry(l).or_insert_with(Q::zero) += c * c2;
                }
            }
            out
        };
        let basis_bracket = |i: usize, j: usize| -> BTreeMap<usize, Q> { self.bracket(i, j).into_iter().collect() };
        let mut bad = 0;
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let mut total: BTreeMap<usize, Q> = BTreeMap::new();
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for (l, v) in br(&basis_bracket(a, b), c) {
                            *total.entry(l).or_insert_with(Q::zero) += v;
                        }
                    }
                    bad += total.values().filter(|v| !v.is_zero()).count();
                }
            }
        }
        bad
    }

    /// Checks that the representation, if any, realizes the brackets.
    pub fn representation_residual(&self) -> Result<usize> {
        let rep = self.representation.as_ref().ok_or(Error::NoRepresentation)?;
        let m = rep[0].size();
        let mut bad = 0;
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                let mut expect = QMatrix::zeros(m);
                for (k, c) in self.bracket(i, j) {
                    expect = expect.add(&rep[k].scale(&c));
                }
                let diff = rep[i].commutator(&rep[j]).sub(&expect);
                bad += diff.nonzero_entries().count();
            }
        }
        Ok(bad)
    }

    /// Whether `h -> self` given on basis elements preserves brackets.
    pub fn is_homomorphism_from(&self, h: &LieAlgebra, images: &[MultiVector]) -> Result<()> {
        if images.len() != h.dim() || images.iter().any(|v| v.degree() != 1) {
            return Err(Error::DimensionMismatch("one degree-1 image per basis element".into()));
        }
        for i in 0..h.dim() {
            for j in i + 1..h.dim() {
                let lhs = self.bracket_elements(&images[i], &images[j]);
                let mut rhs = MultiVector::zero(1);
                for (k, c) in h.bracket(i, j) {
                    rhs = rhs.add(&images[k].scale(&c));
                }
                if lhs != rhs {
                    return Err(Error::NotHomomorphism(format!(
                        "[{}, {}] is not preserved",
                        h.labels[i], h.labels[j]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Subalgebra spanned by the given basis elements of `self`, together
    /// with its inclusion.
    pub fn basis_subalgebra(&self, name: &str, indices: &[usize]) -> Result<(LieAlgebra, Vec<MultiVector>)> {
        let pos: BTreeMap<usize, usize> = indices.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let mut brackets = BTreeMap::new();
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate().skip(a + 1) {
                let mut v = Vec::new();
                for (k, c) in self.bracket(i, j) {
                    let p = pos.get(&k).ok_or_else(|| {
                        Error::NotClosed(format!("[{}, {}] leaves the subalgebra", self.labels[i], self.labels[j]))
                    })?;
                    v.push((*p, c));
                }
                if !v.is_empty() {
                    brackets.insert((a, b), v);
                }
            }
        }
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        let mut h = LieAlgebra::from_structure_constants(name, labels, brackets)?;
        if let Some(rep) = &self.representation {
            h.representation = Some(indices.iter().map(|&i| rep[i].clone()).collect());
        }
        let incl = indices.iter().map(|&i| MultiVector::basis(Blade::single(i))).collect();
        Ok((h, incl))
    }
}

impl Serialize for LieAlgebra {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let constants: Vec<(usize, usize, usize, String)> = self
            .brackets
            .iter()
            .flat_map(|(&(i, j), v)| v.iter().map(move |(k, c)| (i, j, *k, fmt_q(c))))
            .collect();
        let mut st = s.serialize_struct("LieAlgebra", 4)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("dim", &self.dim())?;
        st.serialize_field("labels", &self.labels)?;
        st.serialize_field("structure_constants", &constants)?;
        st.end()
    }
}

/// The skew matrix `A_ab = (-1)^(1+a+b) (E_ab - E_ba)` with 1-based
/// `a != b`; note `A_ba = -A_ab`.
pub fn so_generator(n: usize, a: usize, b: usize) -> QMatrix {
    assert!(a != b && a >= 1 && b >= 1 && a <= n && b <= n);
    let s = if (1 + a + b) % 2 == 0 { qi(1) } else { qi(-1) };
    let mut m = QMatrix::zeros(n);
    m.set(a - 1, b - 1, s.clone());
    m.set(b - 1, a - 1, -s);
    m
}

/// Index of `A_ab` (1-based, `a < b`) in the lexicographic so(n) basis.
pub fn so_index(n: usize, a: usize, b: usize) -> usize {
    assert!(1 <= a && a < b && b <= n);
    // pairs (a', b') with a' < a come first
    let before: usize = (1..a).map(|k| n - k).sum();
    before + (b - a - 1)
}

/// so(n) in the basis `A_ab`, `1 <= a < b <= n`, ordered lexicographically.
pub fn make_so(n: usize) -> Result<LieAlgebra> {
    if n < 2 {
        return Err(Error::Degenerate(format!("so(n) needs n >= 2, got {n}")));
    }
    let mut labels = Vec::new();
    let mut mats = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            labels.push(format!("A{a}{b}"));
            mats.push(so_generator(n, a, b));
        }
    }
    LieAlgebra::from_matrices(format!("so({n})"), labels, mats)
}

/// Realification of `c = p + iq` acting on `z_a = x^(2a) + i x^(2a+1)`.
fn realify(n: usize, entries: &[(usize, usize, Q, Q)]) -> QMatrix {
    let mut m = QMatrix::zeros(2 * n);
    for (a, b, re, im) in entries {
        let (r, c) = (2 * a, 2 * b);
        m.set(r, c, m.get(r, c) + re);
        m.set(r, c + 1, m.get(r, c + 1) - im);
        m.set(r + 1, c, m.get(r + 1, c) + im);
        m.set(r + 1, c + 1, m.get(r + 1, c + 1) + re);
    }
    m
}

/// su(n) acting on `R^(2n) = C^n`.
pub fn make_su_realified(n: usize) -> Result<LieAlgebra> {
    if n < 2 {
        return Err(Error::Degenerate(format!("su(n) needs n >= 2, got {n}")));
    }
    let (one, zero) = (Q::one(), Q::zero());
    let mut labels = Vec::new();
    let mut mats = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            labels.push(format!("X{}{}", a + 1, b + 1));
            mats.push(realify(n, &[(a, b, one.clone(), zero.clone()), (b, a, -one.clone(), zero.clone())]));
            labels.push(format!("Y{}{}", a + 1, b + 1));
            mats.push(realify(n, &[(a, b, zero.clone(), one.clone()), (b, a, zero.clone(), one.clone())]));
        }
    }
    for a in 0..n - 1 {
        labels.push(format!("H{}", a + 1));
        mats.push(realify(n, &[(a, a, zero.clone(), one.clone()), (a + 1, a + 1, zero.clone(), -one.clone())]));
    }
    LieAlgebra::from_matrices(format!("su({n})"), labels, mats)
}

/// u(1) generated by the complex structure `i * id` on `R^(2n)`.
pub fn make_u1(n: usize) -> Result<LieAlgebra> {
    let entries: Vec<_> = (0..n).map(|a| (a, a, Q::zero(), Q::one())).collect();
    LieAlgebra::from_matrices("u(1)", vec!["J".into()], vec![realify(n, &entries)])
}

/// The associative calibration on `R^7` with 0-based indices:
/// `dx^012 + dx^034 + dx^056 + dx^135 - dx^146 - dx^245 - dx^236`.
pub const G2_TERMS: [([usize; 3], i64); 7] = [
    ([0, 1, 2], 1),
    ([0, 3, 4], 1),
    ([0, 5, 6], 1),
    ([1, 3, 5], 1),
    ([1, 4, 6], -1),
    ([2, 4, 5], -1),
    ([2, 3, 6], -1),
];

/// Action of `A` on a constant form, `dx^i -> sum_j A_ji dx^j`, matching
/// `L_{v_A}` for the linear field `v_A = sum A_ji x^j d_i`.
fn act_on_constant_form(a: &[Q], n: usize, form: &BTreeMap<Blade, Q>) -> BTreeMap<Blade, Q> {
    let mut out: BTreeMap<Blade, Q> = BTreeMap::new();
    for (blade, c) in form {
        let idx = blade.to_vec();
        for (pos, &i) in idx.iter().enumerate() {
            for j in 0..n {
                let aji = &a[j * n + i];
                if aji.is_zero() {
                    continue;
                }
                let mut rep = idx.clone();
                rep[pos] = j;
                if let Some((s, b)) = Blade::from_unsorted(&rep) {
                    *out.entry(b).or_insert_with(Q::zero) += c * aji * Q::from_integer(s.into());
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// The stabilizer of the G2 three-form inside gl(7), as the kernel of the
/// 49-column linear system `A -> L_{v_A} phi`.
pub fn make_g2() -> Result<LieAlgebra> {
    let n = 7;
    let phi: BTreeMap<Blade, Q> = G2_TERMS
        .iter()
        .map(|(idx, s)| (Blade::from_sorted(idx), qi(*s)))
        .collect();
    let all3 = crate::algebra::blades(n, 3);
    let row_of: BTreeMap<Blade, usize> = all3.iter().enumerate().map(|(k, b)| (*b, k)).collect();
    let mut m = SparseMatrix::zeros(all3.len(), n * n);
    for col in 0..n * n {
        let mut unit = vec![Q::zero(); n * n];
        unit[col] = Q::one();
        for (b, v) in act_on_constant_form(&unit, n, &phi) {
            m.add_to(row_of[&b], col, v);
        }
    }
    let kernel = m.kernel();
    let mats: Vec<QMatrix> = kernel
        .into_iter()
        .map(|v| {
            let rows = v.chunks(n).map(<[Q]>::to_vec).collect();
            QMatrix::from_rows(rows)
        })
        .collect::<Result<_>>()?;
    let labels = (0..mats.len()).map(|k| format!("g{k}")).collect();
    LieAlgebra::from_matrices("g2", labels, mats)
}

/// Residual `L_{v_A} phi` for a 7x7 matrix, as a constant 3-form.
pub fn g2_defect(a: &QMatrix) -> BTreeMap<Blade, Q> {
    let phi: BTreeMap<Blade, Q> = G2_TERMS
        .iter()
        .map(|(idx, s)| (Blade::from_sorted(idx), qi(*s)))
        .collect();
    act_on_constant_form(a.entries(), a.size(), &phi)
}

/// `h = so(n) + <id>`, acting on `R^(n+1)` with so(n) on the last `n`
/// coordinates. The identity is the last basis element.
pub fn make_so_plus_dilation(n: usize) -> Result<LieAlgebra> {
    let so = make_so(n)?;
    let mut labels: Vec<String> = so.labels().to_vec();
    let mut mats: Vec<QMatrix> = so
        .representation()
        .unwrap()
        .iter()
        .map(|a| embed_lower_block(a))
        .collect();
    labels.push("id".into());
    mats.push(QMatrix::identity(n + 1));
    LieAlgebra::from_matrices(format!("so({n})+R"), labels, mats)
}

/// `diag(0, A)`.
pub fn embed_lower_block(a: &QMatrix) -> QMatrix {
    let n = a.size();
    let mut m = QMatrix::zeros(n + 1);
    for (i, j, v) in a.nonzero_entries() {
        m.set(i + 1, j + 1, v.clone());
    }
    m
}

/// so(n) acting on `R^(n+1)` through `diag(0, A)`.
pub fn make_so_on_lower_block(n: usize) -> Result<LieAlgebra> {
    let so = make_so(n)?;
    let mats = so.representation().unwrap().iter().map(embed_lower_block).collect();
    LieAlgebra::from_matrices(format!("so({n})"), so.labels().to_vec(), mats)
}
