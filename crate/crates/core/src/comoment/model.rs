//! Multisymplectic actions of matrix Lie algebras.

use serde::Serialize;

use crate::algebra::{Numeric, DEFAULT_DIGITS};
use crate::error::{Error, Result};
use crate::forms::{fundamental_fields, lie_derivative_vf, sphere_samples, tangential_values, DiffForm, VectorField};
use crate::lie::LieAlgebra;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Manifold {
    /// `R^m` (or an open subset avoiding the singular loci of `ω`).
    Ambient,
    /// `S^{m-1} ⊂ R^m`; forms are ambient representatives of their pullbacks.
    UnitSphere,
}

#[derive(Clone, Debug)]
pub struct ActionModel {
    name: String,
    algebra: LieAlgebra,
    manifold: Manifold,
    omega: DiffForm,
    fields: Vec<VectorField>,
}

/// Seed for the closedness spot check on spheres.
const CLOSEDNESS_SEED: u64 = 0x5eed;

impl ActionModel {
    /// Checks that `ω` is closed on the manifold and that every basis
    /// element preserves it (`L_{v_A} ω = 0` as ambient forms).
    pub fn new(name: impl Into<String>, algebra: LieAlgebra, manifold: Manifold, omega: DiffForm) -> Result<Self> {
        let fields = fundamental_fields(&algebra)?;
        let m = algebra.rep_size().unwrap_or(0);
        if m != omega.arity() {
            return Err(Error::ArityMismatch(m, omega.arity()));
        }
        let model = ActionModel {
            name: name.into(),
            algebra,
            manifold,
            omega,
            fields,
        };
        model.check_closed()?;
        for (i, v) in model.fields.iter().enumerate() {
            if !lie_derivative_vf(v, &model.omega)?.is_zero() {
                return Err(Error::NotMultisymplectic(format!(
                    "{} does not preserve omega",
                    model.algebra.labels()[i]
                )));
            }
        }
        Ok(model)
    }

    fn check_closed(&self) -> Result<()> {
        let d = self.omega.exterior_d();
        match self.manifold {
            Manifold::Ambient => {
                if !d.is_zero() {
                    return Err(Error::NotMultisymplectic("omega is not closed".into()));
                }
            }
            Manifold::UnitSphere => {
                let m = self.arity();
                if d.degree() + 1 <= m && !d.is_zero() {
                    let ctx = Numeric::new(DEFAULT_DIGITS);
                    for p in sphere_samples(CLOSEDNESS_SEED, m, 5) {
                        if tangential_values(&d, &p, &ctx)?.iter().any(|v| !ctx.is_negligible(v)) {
                            return Err(Error::NotMultisymplectic("omega is not closed on the sphere".into()));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn omega(&self) -> &DiffForm {
        &self.omega
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    pub fn arity(&self) -> usize {
        self.omega.arity()
    }

    /// Degree `D` of `ω`; comoment components run over `1..D`.
    pub fn plectic_degree(&self) -> usize {
        self.omega.degree()
    }

    /// Dimension of the manifold.
    pub fn manifold_dim(&self) -> usize {
        match self.manifold {
            Manifold::Ambient => self.arity(),
            Manifold::UnitSphere => self.arity() - 1,
        }
    }
}
