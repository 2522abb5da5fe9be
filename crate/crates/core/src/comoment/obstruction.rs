//! The pointwise cocycle `c_p` and the existence criterion on spheres.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::rational::serde_q_vec;
use crate::algebra::{blades, Numeric, Scalar, SparseMatrix, SparseVec, DEFAULT_DIGITS, Q};
use crate::error::{Error, Result};
use crate::forms::{contract, eval_on_vectors, sphere_samples, DiffForm, VectorField};
use crate::lie::{ce_differential, is_coboundary, Caps, Cochain};

use super::model::{ActionModel, Manifold};
use super::types::koszul_sign;

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionResult {
    pub degree: usize,
    #[serde(with = "serde_q_vec")]
    pub point: Vec<Q>,
    pub cocycle: Cochain,
    pub cocycle_closed: bool,
    /// A primitive `b` with `δb = c_p` when the class vanishes.
    pub witness: Option<Cochain>,
    pub class_vanishes: bool,
}

/// `v_A(P) = A^T P`.
fn field_at(model: &ActionModel, i: usize, point: &[Q]) -> Result<Vec<Q>> {
    let a = model.algebra().matrix(i)?;
    let m = a.size();
    Ok((0..m)
        .map(|r| (0..m).map(|j| a.get(j, r) * &point[j]).sum())
        .collect())
}

fn check_point(model: &ActionModel, point: &[Q]) -> Result<()> {
    if point.len() != model.arity() {
        return Err(Error::ArityMismatch(model.arity(), point.len()));
    }
    if model.manifold() == Manifold::UnitSphere {
        let n2: Q = point.iter().map(|x| x * x).sum();
        if !n2.is_one() {
            return Err(Error::Degenerate("point is not on the unit sphere".into()));
        }
    }
    Ok(())
}

/// `c_p(x_1 ∧ ... ∧ x_D) = ω_P(v_1(P), ..., v_D(P))`, exactly.
pub fn pointwise_cocycle(model: &ActionModel, point: &[Q]) -> Result<Cochain> {
    check_point(model, point)?;
    let omega = model.omega();
    let d = omega.degree();
    let dim = model.algebra().dim();
    let vs: Vec<Vec<Q>> = (0..dim).map(|i| field_at(model, i, point)).collect::<Result<_>>()?;
    let ctx = Numeric::new(DEFAULT_DIGITS);
    let mut c = Cochain::zero(d);
    if d > dim {
        return Ok(c);
    }
    for b in blades(dim, d) {
        let vecs: Vec<&[Q]> = b.indices().map(|i| vs[i].as_slice()).collect();
        match eval_on_vectors(omega, point, &vecs, &ctx)? {
            Scalar::Exact(v) => {
                if !v.is_zero() {
                    c.add_term(b, v);
                }
            }
            Scalar::Approx(_) => return Err(Error::TranscendentalForm),
        }
    }
    Ok(c)
}

/// Builds `c_p`, asserts `δc_p = 0` and decides whether `[c_p] = 0`.
pub fn obstruction_cp(model: &ActionModel, point: &[Q], caps: &Caps) -> Result<ObstructionResult> {
    if !model.omega().terms().all(|(_, c)| c.is_tau_free()) {
        return Err(Error::TranscendentalForm);
    }
    let d = model.plectic_degree();
    let g = model.algebra();
    caps.check("obstruction cocycle", g.dim(), d)?;
    let c = pointwise_cocycle(model, point)?;
    let closed = ce_differential(g, &c).is_zero();
    if !closed {
        return Err(Error::NotACocycle(d));
    }
    let (witness, vanishes) = if d > g.dim() {
        (None, true)
    } else {
        let w = is_coboundary(g, &c, caps)?;
        let v = w.is_some();
        (w, v)
    };
    Ok(ObstructionResult {
        degree: d,
        point: point.to_vec(),
        cocycle: c,
        cocycle_closed: closed,
        witness,
        class_vanishes: vanishes,
    })
}

/// Verdicts of `obstruction_cp` at `count` seeded sphere points.
pub fn obstruction_verdicts(model: &ActionModel, seed: u64, count: usize, caps: &Caps) -> Result<Vec<bool>> {
    sphere_samples(seed, model.arity(), count)
        .iter()
        .map(|p| obstruction_cp(model, p.point(), caps).map(|r| r.class_vanishes))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Prediction {
    pub exists: bool,
    pub transitive: bool,
    pub orbit_rank: usize,
    pub sphere_dim: usize,
    pub reason: String,
    /// `Some(agrees)` when the obstruction class was computed within caps.
    pub cross_check: Option<bool>,
}

/// Whether `ω` is a nonzero multiple of `ι_E dx^{0..m-1}` on the sphere.
fn is_sphere_volume(model: &ActionModel) -> Result<bool> {
    let m = model.arity();
    if model.omega().degree() + 1 != m {
        return Ok(false);
    }
    let vol = contract(&VectorField::euler(m), &DiffForm::volume(m))?;
    // the (m-1)-forms on S^{m-1} are a line; compare tangential values
    let ctx = Numeric::new(DEFAULT_DIGITS);
    let mut ratio: Option<Scalar> = None;
    for p in sphere_samples(0, m, 3) {
        let frame: Vec<&[Q]> = p.frame().iter().map(|v| v.as_slice()).collect();
        let w = eval_on_vectors(model.omega(), p.point(), &frame, &ctx)?;
        let v = eval_on_vectors(&vol, p.point(), &frame, &ctx)?;
        if ctx.is_negligible(&w) {
            return Ok(false);
        }
        let r = ctx.div(&w, &v)?;
        if let Some(prev) = &ratio {
            if !ctx.is_negligible(&ctx.sub(prev, &r)) {
                return Ok(false);
            }
        }
        ratio = Some(r);
    }
    Ok(true)
}

/// Exists iff the action is not transitive or the sphere is even
/// dimensional. The orbit rank is the largest rank of `ξ ↦ v_ξ(P)` over
/// sampled points.
pub fn predict_comoment_existence(model: &ActionModel, seed: u64, samples: usize, caps: &Caps) -> Result<Prediction> {
    if model.manifold() != Manifold::UnitSphere {
        return Err(Error::NotSphereVolume("model is not a sphere".into()));
    }
    if !is_sphere_volume(model)? {
        return Err(Error::NotSphereVolume("omega is not a volume form of the sphere".into()));
    }
    let n = model.manifold_dim();
    let dim = model.algebra().dim();
    let mut orbit_rank = 0;
    let points = sphere_samples(seed, model.arity(), samples.max(1));
    for p in &points {
        let rows: Vec<SparseVec> = (0..dim)
            .map(|i| {
                field_at(model, i, p.point()).map(|v| {
                    v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect()
                })
            })
            .collect::<Result<_>>()?;
        orbit_rank = orbit_rank.max(SparseMatrix::from_rows(model.arity(), rows).rank());
    }
    let transitive = orbit_rank == n;
    let (exists, reason) = if !transitive {
        (true, format!("not transitive: orbit rank {orbit_rank} < {n}"))
    } else if n % 2 == 0 {
        (true, format!("transitive on S^{n}, n even"))
    } else {
        (false, format!("transitive on S^{n}, n odd"))
    };
    let cross_check = if caps.check("obstruction cocycle", dim, model.plectic_degree()).is_ok() {
        let r = obstruction_cp(model, points[0].point(), caps)?;
        Some(r.class_vanishes == exists)
    } else {
        None
    };
    Ok(Prediction {
        exists,
        transitive,
        orbit_rank,
        sphere_dim: n,
        reason,
        cross_check,
    })
}

/// `[σ_1, ..., σ_k] = ς(k) ι_{v_k} ... ι_{v_1} ω` for Hamiltonian pairs
/// `dσ_i = -ι_{v_i} ω`.
pub fn multibracket(omega: &DiffForm, pairs: &[(DiffForm, VectorField)]) -> Result<DiffForm> {
    if pairs.is_empty() || pairs.len() > omega.degree() {
        return Err(Error::DegreeMismatch(format!(
            "{} arguments for a {}-form",
            pairs.len(),
            omega.degree()
        )));
    }
    let mut out = omega.clone();
    for (i, (sigma, v)) in pairs.iter().enumerate() {
        let iv = contract(v, omega)?;
        if sigma.degree() + 1 != iv.degree() || !sigma.exterior_d().add(&iv).is_zero() {
            return Err(Error::NonHamiltonian(i));
        }
        out = contract(v, &out)?;
    }
    Ok(if koszul_sign(pairs.len()) < 0 { out.neg() } else { out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::qi;
    use crate::comoment::construct::{comoment_sorn, euler_potential, son_on_own_sphere};

    #[test]
    fn so3_on_s2_has_vanishing_class() {
        let model = son_on_own_sphere(3).unwrap();
        let r = obstruction_cp(&model, &[qi(1), qi(0), qi(0)], &Caps::default()).unwrap();
        assert!(r.cocycle_closed);
        assert!(r.class_vanishes);
        assert_eq!(r.degree, 2);
    }

    #[test]
    fn so4_on_s3_is_obstructed() {
        let model = son_on_own_sphere(4).unwrap();
        let r = obstruction_cp(&model, &[qi(0), qi(0), qi(0), qi(1)], &Caps::default()).unwrap();
        assert!(!r.class_vanishes);
        assert!(r.witness.is_none());
        let p = predict_comoment_existence(&model, 1, 3, &Caps::default()).unwrap();
        assert!(p.transitive && !p.exists);
        assert_eq!(p.cross_check, Some(true));
    }

    #[test]
    fn point_off_the_sphere_is_rejected() {
        let model = son_on_own_sphere(3).unwrap();
        assert!(obstruction_cp(&model, &[qi(1), qi(1), qi(0)], &Caps::default()).is_err());
    }

    #[test]
    fn multibracket_is_skew() {
        let (model, f) = comoment_sorn(3, &Caps::default()).unwrap();
        let w = model.omega();
        let pair = |i: usize| (f.component(1, crate::algebra::Blade::single(i)), model.fields()[i].clone());
        let ab = multibracket(w, &[pair(0), pair(1)]).unwrap();
        let ba = multibracket(w, &[pair(1), pair(0)]).unwrap();
        assert_eq!(ab, ba.neg());
        let bad = (euler_potential(3), model.fields()[0].clone());
        assert!(matches!(multibracket(w, &[bad]), Err(Error::NonHamiltonian(0))));
        let bad = (DiffForm::zero(3, 1), model.fields()[0].clone());
        assert!(matches!(multibracket(w, &[bad]), Err(Error::NonHamiltonian(0))));
    }
}
