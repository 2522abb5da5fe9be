//! Exact linear algebra over `Q`.
//!
//! `SparseMatrix` does fraction-free row reduction on integer rows, keeping
//! each row primitive (content divided out) so entries stay small. Before
//! reducing, the matrix is split into the connected components of its
//! row/column incidence graph; boundary matrices of graded Lie algebras fall
//! apart into many small blocks this way. Blocks are reduced in parallel and
//! results are combined in block order, so output is deterministic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::rational::{common_denominator, Q};
use crate::error::{Error, Result};

pub type SparseVec = BTreeMap<usize, Q>;

#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVec>,
}

type IntRow = Vec<(usize, BigInt)>;

struct Component {
    rows: Vec<usize>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            rows: vec![SparseVec::new(); nrows],
        }
    }

    pub fn from_rows(ncols: usize, rows: Vec<SparseVec>) -> Self {
        debug_assert!(rows.iter().all(|r| r.keys().all(|&c| c < ncols)));
        SparseMatrix {
            nrows: rows.len(),
            ncols,
            rows,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.rows[i].get(&j).cloned().unwrap_or_else(Q::zero)
    }

    /// Adds `v` to entry `(i, j)`.
    pub fn add_to(&mut self, i: usize, j: usize, v: Q) {
        if v.is_zero() {
            return;
        }
        let e = self.rows[i].entry(j).or_insert_with(Q::zero);
        *e += v;
        if e.is_zero() {
            self.rows[i].remove(&j);
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t = SparseMatrix::zeros(self.ncols, self.nrows);
        for (i, row) in self.rows.iter().enumerate() {
            for (&j, v) in row {
                t.rows[j].insert(i, v.clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.ncols);
        self.rows
            .iter()
            .map(|row| row.iter().map(|(&j, v)| v * &x[j]).sum())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.components()
            .par_iter()
            .map(|c| echelon(c.rows.iter().map(|&i| to_int_row(&self.rows[i]))).len())
            .sum()
    }

    /// Some solution of `A x = b` (free variables set to zero), or `None`
    /// when the system is inconsistent.
    pub fn solve(&self, b: &[Q]) -> Result<Option<Vec<Q>>> {
        if b.len() != self.nrows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has {} entries, matrix has {} rows",
                b.len(),
                self.nrows
            )));
        }
        let comps = self.components();
        let mut covered = vec![false; self.nrows];
        for c in &comps {
            for &i in &c.rows {
                covered[i] = true;
            }
        }
        if (0..self.nrows).any(|i| !covered[i] && !b[i].is_zero()) {
            return Ok(None);
        }
        let aug = self.ncols;
        let parts: Vec<Option<Vec<(usize, Q)>>> = comps
            .par_iter()
            .map(|c| {
                let rows = c.rows.iter().map(|&i| {
                    let mut r = self.rows[i].clone();
                    if !b[i].is_zero() {
                        r.insert(aug, b[i].clone());
                    }
                    to_int_row(&r)
                });
                let ech = echelon(rows);
                if ech.keys().next_back().is_some_and(|&lead| lead == aug) {
                    return None;
                }
                Some(back_substitute(&ech, aug, &BTreeMap::new()))
            })
            .collect();
        let mut x = vec![Q::zero(); self.ncols];
        for part in parts {
            match part {
                None => return Ok(None),
                Some(vals) => {
                    for (j, v) in vals {
                        x[j] = v;
                    }
                }
            }
        }
        Ok(Some(x))
    }

    /// Basis of the null space, one vector per free column, in column order.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let comps = self.components();
        let mut in_comp = vec![false; self.ncols];
        let per_comp: Vec<Vec<(usize, Vec<(usize, Q)>)>> = comps
            .par_iter()
            .map(|c| {
                let ech = echelon(c.rows.iter().map(|&i| to_int_row(&self.rows[i])));
                let cols = component_columns(&self.rows, &c.rows);
                cols.iter()
                    .filter(|j| !ech.contains_key(j))
                    .map(|&free| {
                        let mut fixed = BTreeMap::new();
                        fixed.insert(free, Q::one());
                        (free, back_substitute(&ech, usize::MAX, &fixed))
                    })
                    .collect()
            })
            .collect();
        for c in &comps {
            for j in component_columns(&self.rows, &c.rows) {
                in_comp[j] = true;
            }
        }
        let mut basis: BTreeMap<usize, Vec<Q>> = BTreeMap::new();
        for j in (0..self.ncols).filter(|&j| !in_comp[j]) {
            let mut v = vec![Q::zero(); self.ncols];
            v[j] = Q::one();
            basis.insert(j, v);
        }
        for (free, vals) in per_comp.into_iter().flatten() {
            let mut v = vec![Q::zero(); self.ncols];
            for (j, x) in vals {
                v[j] = x;
            }
            basis.insert(free, v);
        }
        basis.into_values().collect()
    }

    fn components(&self) -> Vec<Component> {
        let mut parent: Vec<usize> = (0..self.ncols).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for row in &self.rows {
            let mut it = row.keys();
            if let Some(&first) = it.next() {
                let a = find(&mut parent, first);
                for &j in it {
                    let b = find(&mut parent, j);
                    if a != b {
                        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                        parent[hi] = lo;
                    }
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, row) in self.rows.iter().enumerate() {
            if let Some(&first) = row.keys().next() {
                let root = find(&mut parent, first);
                groups.entry(root).or_default().push(i);
            }
        }
        groups.into_values().map(|rows| Component { rows }).collect()
    }
}

fn component_columns(rows: &[SparseVec], idx: &[usize]) -> Vec<usize> {
    let mut cols: Vec<usize> = idx.iter().flat_map(|&i| rows[i].keys().copied()).collect();
    cols.sort_unstable();
    cols.dedup();
    cols
}

fn to_int_row(row: &SparseVec) -> IntRow {
    let den = common_denominator(row.values());
    let r: IntRow = row
        .iter()
        .map(|(&j, v)| (j, (v * Q::from_integer(den.clone())).to_integer()))
        .collect();
    primitive(r)
}

fn primitive(mut r: IntRow) -> IntRow {
    let g = r
        .iter()
        .fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for (_, v) in r.iter_mut() {
            *v /= &g;
        }
    }
    r
}

/// `a * row - b * pivot` with `a`, `b` chosen to cancel the leading entry.
fn eliminate(row: &IntRow, pivot: &IntRow) -> IntRow {
    let lead_r = &row[0].1;
    let lead_p = &pivot[0].1;
    let g = lead_r.gcd(lead_p);
    let a = lead_p / &g;
    let b = lead_r / &g;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cj = pivot.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        let (c, v) = if ci < cj {
            i += 1;
            (ci, &a * &row[i - 1].1)
        } else if cj < ci {
            j += 1;
            (cj, -(&b * &pivot[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ci, &a * &row[i - 1].1 - &b * &pivot[j - 1].1)
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    primitive(out)
}

/// Row echelon form keyed by leading column.
fn echelon(rows: impl Iterator<Item = IntRow>) -> BTreeMap<usize, IntRow> {
    let mut pivots: BTreeMap<usize, IntRow> = BTreeMap::new();
    for mut row in rows {
        while let Some(&(lead, _)) = row.first() {
            match pivots.get(&lead) {
                Some(p) => row = eliminate(&row, p),
                None => {
                    if row[0].1.is_negative() {
                        for (_, v) in row.iter_mut() {
                            *v = -&*v;
                        }
                    }
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    pivots
}

/// Solves the echelon system for its pivot variables. Column `rhs` holds the
/// right-hand side; `fixed` assigns values to (some) free variables, the rest
/// are zero.
fn back_substitute(
    ech: &BTreeMap<usize, IntRow>,
    rhs: usize,
    fixed: &BTreeMap<usize, Q>,
) -> Vec<(usize, Q)> {
    let mut val: BTreeMap<usize, Q> = fixed.clone();
    for (&lead, row) in ech.iter().rev() {
        let mut acc = Q::zero();
        for (c, v) in &row[1..] {
            let coef = Q::from_integer(v.clone());
            if *c == rhs {
                acc += coef;
            } else if let Some(x) = val.get(c) {
                acc -= coef * x;
            }
        }
        let x = acc / Q::from_integer(row[0].1.clone());
        if !x.is_zero() {
            val.insert(lead, x);
        }
    }
    val.into_iter().collect()
}

/// Dense square matrix over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    n: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zeros(n: usize) -> Self {
        QMatrix {
            n,
            data: vec![Q::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("matrix rows must be square".into()));
        }
        Ok(QMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.n + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn entries(&self) -> &[Q] {
        &self.data
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &Q)> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(k, v)| (k / self.n, k % self.n, v))
    }

    pub fn matmul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = QMatrix::zeros(n);
        for (i, k, a) in self.nonzero_entries() {
            for j in 0..n {
                let b = other.get(k, j);
                if !b.is_zero() {
                    out.data[i * n + j] += a * b;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        QMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> QMatrix {
        QMatrix {
            n: self.n,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        self.add(&other.scale(&-Q::one()))
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &QMatrix) -> QMatrix {
        self.matmul(other).sub(&other.matmul(self))
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.n);
        for (i, j, v) in self.nonzero_entries() {
            t.set(j, i, v.clone());
        }
        t
    }
}

/// Coordinates of `target` in the span of `basis` (vectors of equal length),
/// or `None` when it is not in the span.
pub fn decompose(basis: &[Vec<Q>], target: &[Q]) -> Result<Option<Vec<Q>>> {
    let len = target.len();
    if basis.iter().any(|b| b.len() != len) {
        return Err(Error::DimensionMismatch("basis vectors differ in length".into()));
    }
    // columns are basis vectors
    let mut rows = vec![SparseVec::new(); len];
    for (j, b) in basis.iter().enumerate() {
        for (i, v) in b.iter().enumerate() {
            if !v.is_zero() {
                rows[i].insert(j, v.clone());
            }
        }
    }
    SparseMatrix::from_rows(basis.len(), rows).solve(target)
}
