//! Named cases: sphere actions with their known verdicts, and the
//! constructed comoments.

use serde::Serialize;

use crate::comoment::{
    comoment_g2, comoment_hopf, comoment_son_sphere, comoment_sorn, f12_so, g2_volume_model, hopf_model,
    son_on_own_sphere, son_sphere_model, ActionModel, Comoment, Manifold, Mode,
};
use crate::error::{Error, Result};
use crate::forms::{contract, DiffForm, VectorField};
use crate::lie::{make_su_realified, Caps};

/// A group action on a sphere with its volume form.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SphereCase {
    pub id: &'static str,
    pub description: &'static str,
    /// Whether a homotopy comoment exists.
    pub expected_exists: bool,
    /// Whether `cmd obstruction` accepts the case. g2 on `S^6` is only
    /// decided through the transitivity/parity criterion.
    pub obstruction: bool,
    #[serde(skip)]
    build: fn() -> Result<ActionModel>,
}

impl SphereCase {
    pub fn model(&self) -> Result<ActionModel> {
        (self.build)()
    }
}

fn su2_s3() -> Result<ActionModel> {
    let omega = contract(&VectorField::euler(4), &DiffForm::volume(4))?;
    ActionModel::new("su(2) on S^3", make_su_realified(2)?, Manifold::UnitSphere, omega)
}

pub const SPHERE_CASES: &[SphereCase] = &[
    SphereCase {
        id: "so3-s2",
        description: "so(3) on S^2",
        expected_exists: true,
        obstruction: true,
        build: || son_on_own_sphere(3),
    },
    SphereCase {
        id: "so4-s3",
        description: "so(4) on S^3",
        expected_exists: false,
        obstruction: true,
        build: || son_on_own_sphere(4),
    },
    SphereCase {
        id: "su2-s3",
        description: "su(2) on S^3 = SU(2)",
        expected_exists: false,
        obstruction: true,
        build: su2_s3,
    },
    SphereCase {
        id: "so5-s4",
        description: "so(5) on S^4",
        expected_exists: true,
        obstruction: true,
        build: || son_on_own_sphere(5),
    },
    SphereCase {
        id: "so6-s5",
        description: "so(6) on S^5",
        expected_exists: false,
        obstruction: true,
        build: || son_on_own_sphere(6),
    },
    SphereCase {
        id: "hopf-s3",
        description: "u(1) on S^3 by the Hopf action",
        expected_exists: true,
        obstruction: true,
        build: hopf_model,
    },
    SphereCase {
        id: "g2-s6",
        description: "g2 on S^6 with the volume",
        expected_exists: true,
        obstruction: false,
        build: g2_volume_model,
    },
];

pub fn sphere_case(id: &str) -> Result<&'static SphereCase> {
    SPHERE_CASES
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownCase(id.to_string()))
}

/// Cases accepted by `obstruction`.
pub fn obstruction_case(id: &str) -> Result<&'static SphereCase> {
    let c = sphere_case(id)?;
    if c.obstruction {
        Ok(c)
    } else {
        Err(Error::UnknownCase(format!("{id} (no obstruction computation)")))
    }
}

/// Models for `predict`: the fixed sphere cases, `son-sphere` (so(n) on
/// `S^n`) and `sonp1-sphere` (so(n+1) on `S^n`).
pub fn predict_model(id: &str, n: Option<usize>) -> Result<ActionModel> {
    let need_n = || n.ok_or_else(|| Error::InvalidConfig(format!("case {id} needs --n")));
    match id {
        "son-sphere" => son_sphere_model(need_n()?),
        "sonp1-sphere" => son_on_own_sphere(need_n()? + 1),
        _ => sphere_case(id)?.model(),
    }
}

/// Expected verdict for a `predict` case.
pub fn predict_expected(id: &str, n: Option<usize>) -> Result<bool> {
    match (id, n) {
        ("son-sphere", Some(_)) => Ok(true),
        ("sonp1-sphere", Some(n)) => Ok(n % 2 == 0),
        (_, _) if id == "son-sphere" || id == "sonp1-sphere" => Err(Error::InvalidConfig(format!("case {id} needs --n"))),
        _ => Ok(sphere_case(id)?.expected_exists),
    }
}

pub const PREDICT_CASES: &[&str] = &["son-sphere", "sonp1-sphere"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyCase {
    Sorn,
    SonSphere,
    G2S6,
    HopfS3,
    F12So,
}

pub const VERIFY_CASES: &[VerifyCase] = &[
    VerifyCase::Sorn,
    VerifyCase::SonSphere,
    VerifyCase::G2S6,
    VerifyCase::HopfS3,
    VerifyCase::F12So,
];

impl VerifyCase {
    pub fn parse(id: &str) -> Result<Self> {
        VERIFY_CASES
            .iter()
            .copied()
            .find(|c| c.id() == id)
            .ok_or_else(|| Error::UnknownCase(id.to_string()))
    }

    pub fn id(self) -> &'static str {
        match self {
            VerifyCase::Sorn => "sorn",
            VerifyCase::SonSphere => "son-sphere",
            VerifyCase::G2S6 => "g2-s6",
            VerifyCase::HopfS3 => "hopf-s3",
            VerifyCase::F12So => "f12-so",
        }
    }

    pub fn needs_n(self) -> bool {
        matches!(self, VerifyCase::Sorn | VerifyCase::SonSphere | VerifyCase::F12So)
    }

    /// Residuals of this case carry `τ`, so exact mode does not apply.
    pub fn default_mode(self) -> Mode {
        match self {
            VerifyCase::SonSphere => Mode::Numeric,
            _ => Mode::Exact,
        }
    }

    /// Case label used in reports, e.g. `son-sphere-3`.
    pub fn label(self, n: Option<usize>) -> String {
        match n {
            Some(n) if self.needs_n() => format!("{}-{n}", self.id()),
            _ => self.id().to_string(),
        }
    }

    pub fn build(self, n: Option<usize>, caps: &Caps) -> Result<(ActionModel, Comoment)> {
        let n = if self.needs_n() {
            Some(n.ok_or_else(|| Error::InvalidConfig(format!("case {} needs --n", self.id())))?)
        } else {
            None
        };
        match self {
            VerifyCase::Sorn => comoment_sorn(n.unwrap(), caps),
            VerifyCase::SonSphere => comoment_son_sphere(n.unwrap(), caps),
            VerifyCase::G2S6 => comoment_g2(caps),
            VerifyCase::HopfS3 => comoment_hopf().map(|(m, f, _)| (m, f)),
            VerifyCase::F12So => f12_so(n.unwrap()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_resolve() {
        for c in SPHERE_CASES {
            assert_eq!(sphere_case(c.id).unwrap().id, c.id);
        }
        for c in VERIFY_CASES {
            assert_eq!(VerifyCase::parse(c.id()).unwrap(), *c);
        }
        assert!(matches!(sphere_case("so7-s6"), Err(Error::UnknownCase(_))));
        assert!(obstruction_case("g2-s6").is_err());
    }

    #[test]
    fn predict_expectations() {
        assert!(predict_expected("son-sphere", Some(7)).unwrap());
        assert!(!predict_expected("sonp1-sphere", Some(3)).unwrap());
        assert!(predict_expected("sonp1-sphere", None).is_err());
    }
}
