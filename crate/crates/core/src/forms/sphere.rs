//! Exact rational points of the unit sphere and tangential evaluation of
//! ambient forms, which realizes the pullback `j*` pointwise.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::expr::PointValues;
use crate::algebra::rational::serde_q_vec;
use crate::algebra::{blades, Blade, Numeric, Scalar, Q};
use crate::error::{Error, Result};

use super::form::DiffForm;

/// Numerators and denominators of random rationals are bounded by this.
pub const SAMPLE_BOUND: i64 = 100;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpherePoint {
    #[serde(with = "serde_q_vec")]
    point: Vec<Q>,
    #[serde(skip)]
    frame: Vec<Vec<Q>>,
}

impl SpherePoint {
    /// Validates `|p|^2 = 1` and builds the tangent frame.
    pub fn new(point: Vec<Q>) -> Result<Self> {
        let n2: Q = point.iter().map(|x| x * x).sum();
        if !n2.is_one() {
            return Err(Error::Degenerate("point is not on the unit sphere".into()));
        }
        let frame = tangent_frame(&point);
        Ok(SpherePoint { point, frame })
    }

    /// `u ↦ (2u, |u|^2 - 1) / (|u|^2 + 1)` in `R^{len(u)+1}`.
    pub fn stereographic(u: &[Q]) -> Self {
        let s: Q = u.iter().map(|x| x * x).sum();
        let den = &s + Q::one();
        let mut p: Vec<Q> = u.iter().map(|x| x * Q::from_integer(2.into()) / &den).collect();
        p.push((&s - Q::one()) / &den);
        let frame = tangent_frame(&p);
        SpherePoint { point: p, frame }
    }

    pub fn point(&self) -> &[Q] {
        &self.point
    }

    pub fn frame(&self) -> &[Vec<Q>] {
        &self.frame
    }

    pub fn ambient_dim(&self) -> usize {
        self.point.len()
    }

    /// `Σ_{i >= 1} p_i^2`, where `r` vanishes.
    pub fn r_squared(&self) -> Q {
        self.point.iter().skip(1).map(|x| x * x).sum()
    }
}

/// `e_i - p_i p` for every `i` except the coordinate where `|p_i|` is
/// largest. Entries stay in `[-1, 1]`, so tangential values are on the
/// scale of the form's coefficients.
fn tangent_frame(p: &[Q]) -> Vec<Vec<Q>> {
    let skip = (0..p.len())
        .max_by(|&a, &b| p[a].abs().cmp(&p[b].abs()).then(b.cmp(&a)))
        .unwrap_or(0);
    (0..p.len())
        .filter(|&i| i != skip)
        .map(|i| {
            (0..p.len())
                .map(|k| {
                    let e = if k == i { Q::one() } else { Q::zero() };
                    e - &p[i] * &p[k]
                })
                .collect()
        })
        .collect()
}

fn random_rational(rng: &mut ChaCha8Rng) -> Q {
    let n = rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
    let d = rng.gen_range(1..=SAMPLE_BOUND);
    Q::new(n.into(), d.into())
}

/// `count` pseudo-random rational points of `S^{m-1}`, avoiding `r = 0`
/// (where `τ` is undefined). Deterministic in `seed`.
pub fn sphere_samples(seed: u64, m: usize, count: usize) -> Vec<SpherePoint> {
    assert!(m >= 2, "sphere samples need m >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u: Vec<Q> = (0..m - 1).map(|_| random_rational(&mut rng)).collect();
        let p = SpherePoint::stereographic(&u);
        if !p.r_squared().is_zero() {
            out.push(p);
        }
    }
    out
}

pub fn sphere_sample(seed: u64, m: usize) -> SpherePoint {
    sphere_samples(seed, m, 1).pop().unwrap()
}

/// `count` pseudo-random rational points of `R^m` with `r != 0`.
pub fn ambient_samples(seed: u64, m: usize, count: usize) -> Vec<Vec<Q>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p: Vec<Q> = (0..m).map(|_| random_rational(&mut rng)).collect();
        if p.iter().skip(1).any(|x| !x.is_zero()) {
            out.push(p);
        }
    }
    out
}

fn det(mut a: Vec<Vec<Q>>) -> Q {
    let n = a.len();
    let mut d = Q::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Q::zero();
        };
        if piv != c {
            a.swap(piv, c);
            d = -d;
        }
        let pv = a[c][c].clone();
        d *= &pv;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &pv;
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    d
}

/// Coefficient values of `a` at `point`, in term order.
fn coefficient_values(a: &DiffForm, point: &[Q], ctx: &Numeric) -> Result<Vec<(Blade, Scalar)>> {
    let pv = PointValues::new(point, a.arity())?;
    a.terms()
        .map(|(b, c)| Ok((*b, c.eval_with(&pv, ctx)?)))
        .collect()
}

/// `a_P(w_1, ..., w_q) = Σ_I a_I(P) det[(w_t)_{i_u}]`.
pub fn eval_on_vectors(a: &DiffForm, point: &[Q], vectors: &[&[Q]], ctx: &Numeric) -> Result<Scalar> {
    if vectors.len() != a.degree() {
        return Err(Error::DegreeMismatch(format!(
            "a {}-form needs {} vectors, got {}",
            a.degree(),
            a.degree(),
            vectors.len()
        )));
    }
    let vals = coefficient_values(a, point, ctx)?;
    Ok(combine(&vals, vectors, ctx))
}

fn combine(vals: &[(Blade, Scalar)], vectors: &[&[Q]], ctx: &Numeric) -> Scalar {
    let mut total = Scalar::zero();
    for (b, v) in vals {
        let idx = b.to_vec();
        let minor: Vec<Vec<Q>> = vectors.iter().map(|w| idx.iter().map(|&i| w[i].clone()).collect()).collect();
        let d = det(minor);
        if !d.is_zero() {
            total = ctx.add(&total, &ctx.mul(v, &Scalar::Exact(d)));
        }
    }
    total
}

/// `(j*a)_P` on the frame vectors named by `selector`.
pub fn tangential_eval(a: &DiffForm, p: &SpherePoint, selector: &[usize], ctx: &Numeric) -> Result<Scalar> {
    if a.degree() > p.frame.len() {
        return Err(Error::DegreeMismatch(format!(
            "a {}-form has no tangential values on a {}-sphere",
            a.degree(),
            p.frame.len()
        )));
    }
    if let Some(&s) = selector.iter().find(|&&s| s >= p.frame.len()) {
        return Err(Error::IndexOutOfRange {
            index: s,
            arity: p.frame.len(),
        });
    }
    let vecs: Vec<&[Q]> = selector.iter().map(|&s| p.frame[s].as_slice()).collect();
    eval_on_vectors(a, &p.point, &vecs, ctx)
}

/// Tangential values on every `q`-subset of the frame, in lexicographic
/// order. Their vanishing is equivalent to `(j*a)_P = 0`.
pub fn tangential_values(a: &DiffForm, p: &SpherePoint, ctx: &Numeric) -> Result<Vec<Scalar>> {
    let q = a.degree();
    if q > p.frame.len() {
        return Err(Error::DegreeMismatch(format!(
            "a {q}-form has no tangential values on a {}-sphere",
            p.frame.len()
        )));
    }
    if a.is_zero() {
        return Ok(vec![Scalar::zero(); crate::algebra::binomial(p.frame.len(), q) as usize]);
    }
    let vals = coefficient_values(a, &p.point, ctx)?;
    Ok(blades(p.frame.len(), q)
        .into_iter()
        .map(|sel| {
            let vecs: Vec<&[Q]> = sel.indices().map(|s| p.frame[s].as_slice()).collect();
            combine(&vals, &vecs, ctx)
        })
        .collect())
}

/// Ambient values on every `q`-subset of the standard basis, i.e. the
/// coefficients at the point.
pub fn ambient_values(a: &DiffForm, point: &[Q], ctx: &Numeric) -> Result<Vec<Scalar>> {
    Ok(coefficient_values(a, point, ctx)?.into_iter().map(|(_, v)| v).collect())
}
