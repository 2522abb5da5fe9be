//! Runs a command and renders its report.

use std::fmt::Write;

use msk_core::comoment::{
    obstruction_cp, predict_comoment_existence, Comoment, verify_equivariance, verify_with_sign_resolution, ObstructionResult, Prediction,
    VerificationReport,
};
use msk_core::algebra::{Blade, ExprCoeff};
use msk_core::forms::{sphere_sample, DiffForm};
use msk_core::lie::{homology, make_g2, make_so, make_su_realified, HomologyReport, LieAlgebra};
use msk_core::registry::{obstruction_case, predict_expected, predict_model, VerifyCase};
use msk_core::{Error, Result};
use serde::Serialize;

use crate::config::{parse_degrees, Command, RunConfig};
use crate::{AlgebraName, Format};

pub struct Output {
    pub text: String,
    pub code: u8,
}

#[derive(Serialize)]
struct HomologyOutput {
    algebra: String,
    dim: usize,
    degrees: Vec<HomologyReport>,
}

#[derive(Serialize)]
struct ObstructionOutput {
    case: String,
    description: String,
    expected_exists: bool,
    agrees: bool,
    result: ObstructionResult,
}

#[derive(Serialize)]
struct PredictOutput {
    case: String,
    n: Option<usize>,
    expected_exists: bool,
    agrees: bool,
    prediction: Prediction,
}

#[derive(Serialize)]
struct VerifyOutput {
    #[serde(flatten)]
    report: VerificationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    equivariance: Option<VerificationReport>,
}

fn algebra(name: AlgebraName, n: Option<usize>) -> Result<LieAlgebra> {
    let need_n = || n.ok_or_else(|| Error::InvalidConfig("--n is required for so and su".into()));
    match name {
        AlgebraName::So => make_so(need_n()?),
        AlgebraName::Su => make_su_realified(need_n()?),
        AlgebraName::G2 => make_g2(),
    }
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn run(config: &RunConfig) -> Result<Output> {
    let caps = config.caps();
    let table = config.format == Format::Table;
    match &config.command {
        Command::Homology { algebra: name, n, degrees } => {
            let g = algebra(*name, *n)?;
            let (a, b) = match degrees {
                Some(s) => parse_degrees(s, g.dim())?,
                None => (0, g.dim()),
            };
            let reports = (a..=b).map(|k| homology(&g, k, &caps)).collect::<Result<Vec<_>>>()?;
            let out = HomologyOutput {
                algebra: g.name().to_string(),
                dim: g.dim(),
                degrees: reports,
            };
            let text = if table { homology_table(&out) } else { json(&out)? };
            Ok(Output { text, code: 0 })
        }
        Command::Obstruction { case, seed } => {
            let c = obstruction_case(case)?;
            let model = c.model()?;
            let p = sphere_sample(*seed, model.arity());
            let result = obstruction_cp(&model, p.point(), &caps)?;
            let out = ObstructionOutput {
                case: c.id.into(),
                description: c.description.into(),
                expected_exists: c.expected_exists,
                agrees: result.class_vanishes == c.expected_exists,
                result,
            };
            let text = if table { obstruction_table(&out) } else { json(&out)? };
            Ok(Output { text, code: 0 })
        }
        Command::Verify {
            case,
            n,
            equivariance,
            perturb,
            ..
        } => {
            let vc = VerifyCase::parse(case)?;
            let opts = config.verify_options(vc.default_mode())?;
            let (model, mut f) = vc.build(*n, &caps)?;
            if *perturb {
                f = perturbed(f)?;
            }
            let label = vc.label(*n);
            // a uniform sign flip on a component, if one repairs every
            // residual, is applied and recorded under conventions.sign_flips
            let (f, report) = verify_with_sign_resolution(&label, &f, &model, &opts)?;
            let eq = if *equivariance {
                Some(verify_equivariance(&label, &f, &model, &opts)?)
            } else {
                None
            };
            let pass = report.passed() && eq.as_ref().is_none_or(|r| r.passed());
            let out = VerifyOutput { report, equivariance: eq };
            let text = if table { verify_table(&out) } else { json(&out)? };
            Ok(Output {
                text,
                code: if pass { 0 } else { 1 },
            })
        }
        Command::Predict { case, n, samples, seed } => {
            let model = predict_model(case, *n)?;
            let expected = predict_expected(case, *n)?;
            let prediction = predict_comoment_existence(&model, *seed, *samples, &caps)?;
            let out = PredictOutput {
                case: case.clone(),
                n: *n,
                expected_exists: expected,
                agrees: prediction.exists == expected,
                prediction,
            };
            let text = if table { predict_table(&out) } else { json(&out)? };
            Ok(Output { text, code: 0 })
        }
    }
}

fn perturbed(f: Comoment) -> Result<Comoment> {
    let b = Blade::single(0);
    let m = f.arity();
    let deg = f.plectic_degree().saturating_sub(2);
    let extra = DiffForm::volume_from(deg + 1, 1);
    let extra = DiffForm::from_terms(m, deg, extra.terms().map(|(b, _)| (*b, ExprCoeff::x(m, 0))))?;
    let value = f.component(1, b).add(&extra);
    f.with_value(1, b, value)
}

fn homology_table(out: &HomologyOutput) -> String {
    let mut s = format!("{} (dim {})\n", out.algebra, out.dim);
    let _ = writeln!(s, "{:>3} {:>8} {:>8} {:>10} {:>9}", "k", "chains", "cycles", "boundaries", "homology");
    for r in &out.degrees {
        let _ = writeln!(
            s,
            "{:>3} {:>8} {:>8} {:>10} {:>9}",
            r.degree, r.dim_chains, r.dim_cycles, r.dim_boundaries, r.dim_homology
        );
    }
    s
}

fn obstruction_table(out: &ObstructionOutput) -> String {
    let r = &out.result;
    format!(
        "case            {}\ndescription     {}\ndegree          {}\ncocycle closed  {}\nclass vanishes  {}\nexpected        {}\nagrees          {}\n",
        out.case, out.description, r.degree, r.cocycle_closed, r.class_vanishes, out.expected_exists, out.agrees
    )
}

fn predict_table(out: &PredictOutput) -> String {
    let p = &out.prediction;
    let cross = match p.cross_check {
        Some(true) => "agrees",
        Some(false) => "DISAGREES",
        None => "skipped (cap)",
    };
    format!(
        "case            {}{}\nexists          {}\nreason          {}\norbit rank      {} (sphere dim {})\nobstruction     {}\nexpected        {}\n",
        out.case,
        out.n.map(|n| format!(" n={n}")).unwrap_or_default(),
        p.exists,
        p.reason,
        p.orbit_rank,
        p.sphere_dim,
        cross,
        out.expected_exists
    )
}

fn report_lines(s: &mut String, r: &VerificationReport) {
    for e in &r.equations {
        let _ = writeln!(
            s,
            "  k={} {:?} {:?} {} {}",
            e.k,
            e.tuple,
            e.mode,
            e.residual,
            if e.pass { "ok" } else { "FAIL" }
        );
    }
    for w in &r.warnings {
        let _ = writeln!(s, "  warning: {w}");
    }
    let _ = writeln!(s, "  verdict: {:?}", r.verdict);
}

fn verify_table(out: &VerifyOutput) -> String {
    let mut s = format!("{}\n", out.report.case);
    report_lines(&mut s, &out.report);
    if let Some(eq) = &out.equivariance {
        s.push_str("equivariance\n");
        report_lines(&mut s, eq);
    }
    s
}
