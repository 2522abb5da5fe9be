//! Checking the comoment equations
//! `-f_{k-1}(∂p) = d f_k(p) + ς(k) ι(v_p) ω` and equivariance.

use astro_float::BigFloat;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{binomial, blades, fmt_q, Blade, Numeric, Scalar, DEFAULT_DIGITS, Q};
use crate::error::{Error, Result};
use crate::forms::{ambient_samples, contract_element, lie_derivative_vf, sphere_samples, tangential_values, DiffForm, SpherePoint};
use crate::lie::{adjoint_action, ce_boundary, Caps, MultiVector};

use super::model::{ActionModel, Manifold};
use super::types::{koszul_sign, Comoment};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TOLERANCE: &str = "1e-25";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Numeric,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub mode: Mode,
    pub samples: usize,
    pub digits: u32,
    pub tolerance: String,
    pub seed: u64,
    pub caps: Caps,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: Mode::Exact,
            samples: 10,
            digits: DEFAULT_DIGITS,
            tolerance: DEFAULT_TOLERANCE.into(),
            seed: DEFAULT_SEED,
            caps: Caps::default(),
        }
    }
}

impl VerifyOptions {
    pub fn numeric(samples: usize) -> Self {
        VerifyOptions {
            mode: Mode::Numeric,
            samples,
            ..Default::default()
        }
    }

    /// The tolerance must sit above the noise floor `10^-(digits-10)`.
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidConfig("samples must be at least 1".into()));
        }
        if self.digits < 20 {
            return Err(Error::InvalidConfig("precision must be at least 20 digits".into()));
        }
        let ctx = Numeric::new(self.digits);
        let tol = parse_tolerance(&ctx, &self.tolerance)?;
        let floor = ctx.parse(&format!("1e-{}", self.digits - 10));
        if tol.cmp(&floor).is_none_or(|c| c <= 0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance {} must exceed 1e-{} at {} digits",
                self.tolerance,
                self.digits - 10,
                self.digits
            )));
        }
        Ok(())
    }
}

fn parse_tolerance(ctx: &Numeric, s: &str) -> Result<BigFloat> {
    let t = ctx.parse(s.trim());
    if t.is_nan() || t.is_zero() || t.is_negative() {
        return Err(Error::InvalidConfig(format!("tolerance {s:?} is not a positive number")));
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquationResult {
    pub k: usize,
    pub tuple: Vec<usize>,
    pub mode: Mode,
    pub residual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Conventions {
    pub koszul_sign: String,
    pub contraction: String,
    pub fundamental_field: String,
    pub boundary: String,
    pub equation: String,
    pub sign_flips: Vec<usize>,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            koszul_sign: "-(-1)^(k(k+1)/2)".into(),
            contraction: "i(v1^...^vk) = i(vk)...i(v1)".into(),
            fundamental_field: "v_A = sum_ij A_ji x^j d_i, [v_A, v_B] = v_[A,B]".into(),
            boundary: "d(x1^...^xk) = sum_{i<j} (-1)^(i+j) [xi,xj]^x1^..^xk".into(),
            equation: "-f_(k-1)(dp) = d f_k(p) + s(k) i(v_p) omega".into(),
            sign_flips: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub case: String,
    pub equations: Vec<EquationResult>,
    pub conventions: Conventions,
    pub verdict: Verdict,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    fn assemble(case: &str, equations: Vec<EquationResult>, warnings: Vec<String>) -> Self {
        let verdict = if equations.iter().all(|e| e.pass) { Verdict::Pass } else { Verdict::Fail };
        VerificationReport {
            case: case.into(),
            equations,
            conventions: Conventions::default(),
            verdict,
            warnings,
        }
    }

    /// Largest numeric residual as `f64`, for summaries.
    pub fn max_numeric_residual(&self) -> Option<f64> {
        self.equations
            .iter()
            .filter(|e| e.mode == Mode::Numeric)
            .map(|e| e.residual.parse::<f64>().unwrap_or(f64::INFINITY))
            .fold(None, |acc, x| Some(acc.map_or(x, |a: f64| a.max(x))))
    }
}

/// Sample points for a model, shared by all equations.
pub(crate) enum Samples {
    Ambient(Vec<Vec<Q>>),
    Sphere(Vec<SpherePoint>),
}

impl Samples {
    pub(crate) fn for_model(model: &ActionModel, count: usize, seed: u64) -> Self {
        match model.manifold() {
            Manifold::Ambient => Samples::Ambient(ambient_samples(seed, model.arity(), count)),
            Manifold::UnitSphere => Samples::Sphere(sphere_samples(seed, model.arity(), count)),
        }
    }
}

fn fmt_scalar_abs(ctx: &Numeric, s: &Scalar) -> String {
    match ctx.abs(s) {
        Scalar::Exact(q) => fmt_q(&q),
        a => {
            let f = a.to_f64();
            if f == 0.0 && !ctx.is_negligible(&a) {
                "1e-300".into()
            } else {
                format!("{f:.3e}")
            }
        }
    }
}

/// Decides whether a residual form vanishes on the model's manifold.
///
/// Ambient residuals are tested symbolically (the coefficient ring has an
/// exact zero test); the reported magnitude is the largest value at the
/// sample points. Sphere residuals are evaluated tangentially at every
/// sample point on every frame subset.
pub(crate) fn assess(
    form: &DiffForm,
    model: &ActionModel,
    samples: &Samples,
    opts: &VerifyOptions,
    warnings: &mut Vec<String>,
    label: &str,
) -> Result<(Mode, String, bool)> {
    let ctx = Numeric::new(opts.digits);
    let tol = parse_tolerance(&ctx, &opts.tolerance)?;
    if form.is_zero() {
        return Ok((Mode::Exact, "0".into(), true));
    }
    if opts.mode == Mode::Exact && !form.is_tau_free() {
        warnings.push(format!(
            "{label}: exact mode requested but the residual has tau-dependent coefficients; evaluated numerically"
        ));
    }
    let mut max = Scalar::zero();
    match samples {
        Samples::Ambient(points) => {
            for p in points {
                for v in crate::forms::ambient_values(form, p, &ctx)? {
                    max = ctx.max_abs(max, v);
                }
            }
            let mode = if max.is_exact() { Mode::Exact } else { Mode::Numeric };
            // symbolic nonzero: never a pass, whatever the samples show
            Ok((mode, fmt_scalar_abs(&ctx, &max), false))
        }
        Samples::Sphere(points) => {
            let _ = model;
            for p in points {
                for v in tangential_values(form, p, &ctx)? {
                    max = ctx.max_abs(max, v);
                }
            }
            Ok(match &max {
                Scalar::Exact(q) => (Mode::Exact, fmt_q(q), num_traits::Zero::is_zero(q)),
                Scalar::Approx(_) => {
                    if opts.mode == Mode::Exact && form.is_tau_free() {
                        warnings.push(format!(
                            "{label}: exact mode requested but radicals are irrational at the samples; evaluated numerically"
                        ));
                    }
                    (Mode::Numeric, fmt_scalar_abs(&ctx, &max), ctx.below(&max, &tol))
                }
            })
        }
    }
}

/// Residual form of the `k`-th equation on `e_I`.
pub fn equation_residual(f: &Comoment, model: &ActionModel, k: usize, b: Blade) -> Result<DiffForm> {
    let g = model.algebra();
    let d = model.plectic_degree();
    let p = MultiVector::basis(b);
    let prev = f.apply(k - 1, &ce_boundary(g, &p));
    let mut res = contract_element(model.fields(), &p, model.omega())?;
    if koszul_sign(k) < 0 {
        res = res.neg();
    }
    res = res.add(&prev);
    if k < d {
        res = res.add(&f.component(k, b).exterior_d());
    }
    Ok(res)
}

/// Degrees `k` whose equation only involves stored components.
fn checked_degrees(f: &Comoment) -> std::ops::RangeInclusive<usize> {
    if f.is_complete() {
        1..=f.plectic_degree()
    } else {
        1..=f.stored()
    }
}

fn equation_list(d: usize, degrees: impl Iterator<Item = usize>, caps: &Caps) -> Result<Vec<(usize, Blade)>> {
    let mut out = Vec::new();
    for k in degrees {
        if k > d {
            continue;
        }
        caps.check("comoment equations", d, k)?;
        out.extend(blades(d, k).into_iter().map(|b| (k, b)));
    }
    Ok(out)
}

pub fn verify_comoment(case: &str, f: &Comoment, model: &ActionModel, opts: &VerifyOptions) -> Result<VerificationReport> {
    opts.validate()?;
    if f.plectic_degree() != model.plectic_degree() || f.arity() != model.arity() {
        return Err(Error::DegreeMismatch(format!(
            "comoment for degree {} forms on R^{}, model has degree {} on R^{}",
            f.plectic_degree(),
            f.arity(),
            model.plectic_degree(),
            model.arity()
        )));
    }
    let samples = Samples::for_model(model, opts.samples, opts.seed);
    let list = equation_list(model.algebra().dim(), checked_degrees(f), &opts.caps)?;
    let results: Vec<Result<(EquationResult, Vec<String>)>> = list
        .par_iter()
        .map(|&(k, b)| {
            let res = equation_residual(f, model, k, b)?;
            let mut w = Vec::new();
            let label = format!("k={k} tuple={:?}", b.to_vec());
            let (mode, residual, pass) = assess(&res, model, &samples, opts, &mut w, &label)?;
            Ok((
                EquationResult {
                    k,
                    tuple: b.to_vec(),
                    mode,
                    residual,
                    pass,
                },
                w,
            ))
        })
        .collect();
    let mut equations = Vec::with_capacity(results.len());
    let mut warnings = Vec::new();
    for r in results {
        let (e, w) = r?;
        equations.push(e);
        warnings.extend(w);
    }
    if !f.is_complete() {
        warnings.push(format!(
            "partial comoment: components 1..{} stored, equations k <= {} checked",
            f.stored(),
            f.stored()
        ));
    }
    Ok(VerificationReport::assemble(case, equations, warnings))
}

/// Checks `L_{v_ξ} f_k(b) = f_k([ξ, b])` for basis `ξ` and basis `b`.
pub fn verify_equivariance(case: &str, f: &Comoment, model: &ActionModel, opts: &VerifyOptions) -> Result<VerificationReport> {
    opts.validate()?;
    let g = model.algebra();
    let samples = Samples::for_model(model, opts.samples, opts.seed);
    let list = equation_list(g.dim(), 1..=f.stored(), &opts.caps)?;
    let items: Vec<(usize, usize, Blade)> = list
        .into_iter()
        .flat_map(|(k, b)| (0..g.dim()).map(move |xi| (xi, k, b)))
        .collect();
    let results: Vec<Result<(EquationResult, Vec<String>)>> = items
        .par_iter()
        .map(|&(xi, k, b)| {
            let lhs = lie_derivative_vf(&model.fields()[xi], &f.component(k, b))?;
            let rhs = f.apply(k, &adjoint_action(g, xi, &MultiVector::basis(b)));
            let mut w = Vec::new();
            let label = format!("xi={xi} k={k} tuple={:?}", b.to_vec());
            let (mode, residual, pass) = assess(&lhs.sub(&rhs), model, &samples, opts, &mut w, &label)?;
            let mut tuple = vec![xi];
            tuple.extend(b.indices());
            Ok((
                EquationResult {
                    k,
                    tuple,
                    mode,
                    residual,
                    pass,
                },
                w,
            ))
        })
        .collect();
    let mut equations = Vec::new();
    let mut warnings = Vec::new();
    for r in results {
        let (e, w) = r?;
        equations.push(e);
        warnings.extend(w);
    }
    Ok(VerificationReport::assemble(case, equations, warnings))
}

/// Runs `verify_comoment`; if it fails and negating some set of components
/// repairs every residual, returns the repaired comoment with the flips
/// recorded in the report.
pub fn verify_with_sign_resolution(
    case: &str,
    f: &Comoment,
    model: &ActionModel,
    opts: &VerifyOptions,
) -> Result<(Comoment, VerificationReport)> {
    let report = verify_comoment(case, f, model, opts)?;
    if report.passed() || f.stored() > 6 {
        return Ok((f.clone(), report));
    }
    let k_max = f.stored();
    for mask in 1u32..(1 << k_max) {
        let flips: Vec<usize> = (1..=k_max).filter(|k| mask & (1 << (k - 1)) != 0).collect();
        let mut g = f.clone();
        for &k in &flips {
            g = g.scale_component(k, &-Q::from_integer(1.into()));
        }
        let mut r = verify_comoment(case, &g, model, opts)?;
        if r.passed() {
            r.conventions.sign_flips = flips;
            return Ok((g, r));
        }
    }
    Ok((f.clone(), report))
}

/// `C(d, k)` summed over the checked degrees, for progress estimates.
pub fn equation_count(f: &Comoment, dim: usize) -> u128 {
    checked_degrees(f).map(|k| binomial(dim, k)).sum()
}
