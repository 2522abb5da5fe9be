//! Acceptance run: one PASS/FAIL line per criterion.

use std::process::Command;
use std::time::{Duration, Instant};

use msk_core::algebra::q;
use msk_core::comoment::*;
use msk_core::forms::{contract, multicartan_residual, sphere_sample, DiffForm, TaggedField, VectorField};
use msk_core::lie::{
    ce_boundary, ce_differential, find_primitive, homology, make_g2, make_so, make_so_on_lower_block,
    make_so_plus_dilation, make_su_realified, make_u1, Caps, LieAlgebra,
};
use msk_core::random::{random_cochain, random_form, random_multivector, rng};
use msk_core::registry::SPHERE_CASES;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Coefficients of `Π (1 + t^d)` up to `t^max`.
fn poincare(exps: &[usize], max: usize) -> Vec<usize> {
    let mut c = vec![0usize; max + 1];
    c[0] = 1;
    for &d in exps {
        for k in (d..=max).rev() {
            c[k] += c[k - d];
        }
    }
    c
}

fn criterion_1() -> Outcome {
    let caps = Caps::default();
    let cases: [(usize, &[usize], Option<usize>); 4] =
        [(3, &[3], None), (4, &[3, 3], None), (5, &[3, 7], None), (6, &[3, 5, 7], Some(5))];
    let mut summary = Vec::new();
    for (n, exps, top) in cases {
        let g = make_so(n).map_err(e2s)?;
        let max = top.unwrap_or(g.dim());
        let want = poincare(exps, max);
        let got: Vec<usize> = (0..=max)
            .map(|k| homology(&g, k, &caps).map(|r| r.dim_homology))
            .collect::<Result<_, _>>()
            .map_err(e2s)?;
        ensure(got == want, || format!("so({n}): got {got:?}, want {want:?}"))?;
        summary.push(format!("so({n}) {got:?}"));
    }
    Ok(summary.join("; "))
}

fn criterion_2() -> Outcome {
    let caps = Caps::default();
    let mut summary = Vec::new();
    for case in SPHERE_CASES.iter().filter(|c| c.obstruction) {
        let model = case.model().map_err(e2s)?;
        let p = predict_comoment_existence(&model, DEFAULT_SEED, 3, &caps).map_err(e2s)?;
        let pt = sphere_sample(DEFAULT_SEED, model.arity());
        let r = obstruction_cp(&model, pt.point(), &caps).map_err(e2s)?;
        ensure(r.cocycle_closed, || format!("{}: c_p not closed", case.id))?;
        ensure(p.exists == case.expected_exists, || format!("{}: predict says {}", case.id, p.exists))?;
        ensure(r.class_vanishes == case.expected_exists, || {
            format!("{}: obstruction says {}", case.id, r.class_vanishes)
        })?;
        ensure(p.cross_check == Some(true), || format!("{}: cross-check {:?}", case.id, p.cross_check))?;
        summary.push(format!("{} {}", case.id, if p.exists { "exists" } else { "none" }));
    }
    Ok(summary.join(", "))
}

fn criterion_3() -> Outcome {
    for n in 2..=4 {
        let b = beta_primitive(n).map_err(e2s)?;
        ensure(b.exterior_d() == rescaled_volume(n), || format!("d beta != eta for n = {n}"))?;
    }
    let phi = g2_form();
    let a = contract(&VectorField::euler(7), &phi).map_err(e2s)?.scale(&q(1, 3));
    ensure(a.exterior_d() == phi, || "d(i_E phi / 3) != phi".into())?;
    for n in 2..=5 {
        ensure(euler_potential(n).exterior_d() == DiffForm::volume(n), || {
            format!("d(i_E dx / {n}) != dx for n = {n}")
        })?;
    }
    Ok("beta n=2..4, phi, Euler potentials n=2..5 exact".into())
}

fn exact_zero(report: &VerificationReport) -> Result<(), String> {
    ensure(report.passed(), || format!("{} fails", report.case))?;
    for e in &report.equations {
        ensure(e.mode == Mode::Exact && e.residual == "0", || {
            format!("{}: k={} {:?} residual {} ({:?})", report.case, e.k, e.tuple, e.residual, e.mode)
        })?;
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let caps = Caps::default();
    let opts = VerifyOptions::default();
    let mut built: Vec<(String, ActionModel, Comoment)> = Vec::new();
    for n in 3..=5 {
        let (m, f) = comoment_sorn(n, &caps).map_err(e2s)?;
        built.push((format!("sorn-{n}"), m, f));
    }
    let (m, f) = comoment_g2(&caps).map_err(e2s)?;
    built.push(("g2-s6".into(), m, f));
    let (m, f, _) = comoment_hopf().map_err(e2s)?;
    built.push(("hopf-s3".into(), m, f));
    for n in [3, 5] {
        let (m, f) = f12_so(n).map_err(e2s)?;
        built.push((format!("f12-so-{n}"), m, f));
    }
    let mut count = 0;
    for (case, m, f) in &built {
        let r = verify_comoment(case, f, m, &opts).map_err(e2s)?;
        exact_zero(&r)?;
        count += r.equations.len();
    }
    Ok(format!("{count} equations exactly 0 over {} cases, {} samples", built.len(), opts.samples))
}

fn criterion_5() -> Outcome {
    let caps = Caps::default();
    let opts = VerifyOptions::numeric(25);
    let tol = 1e-25;
    let mut worst: f64 = 0.0;
    let (mut exact, mut numeric) = (0, 0);
    for n in 2..=4 {
        let (m, f) = comoment_son_sphere(n, &caps).map_err(e2s)?;
        let r = verify_comoment(&format!("son-sphere-{n}"), &f, &m, &opts).map_err(e2s)?;
        let max = r.max_numeric_residual().unwrap_or(0.0);
        ensure(r.passed() && max < tol, || format!("n = {n}: max residual {max:e}"))?;
        for e in &r.equations {
            match e.mode {
                Mode::Exact => {
                    ensure(e.residual == "0", || format!("n = {n}: exact residual {}", e.residual))?;
                    exact += 1;
                }
                Mode::Numeric => numeric += 1,
            }
        }
        worst = worst.max(max);
    }
    Ok(format!(
        "max residual {worst:.3e} < 1e-25 at 50 digits, 25 points; {exact} equations exactly 0 at the samples, {numeric} numeric"
    ))
}

fn constructed_algebras() -> Result<Vec<LieAlgebra>, String> {
    let mut out = Vec::new();
    for n in 2..=6 {
        out.push(make_so(n).map_err(e2s)?);
    }
    for n in 2..=4 {
        out.push(make_so_plus_dilation(n).map_err(e2s)?);
        out.push(make_so_on_lower_block(n).map_err(e2s)?);
    }
    out.push(make_su_realified(2).map_err(e2s)?);
    out.push(make_su_realified(3).map_err(e2s)?);
    out.push(make_u1(2).map_err(e2s)?);
    out.push(make_g2().map_err(e2s)?);
    Ok(out)
}

fn criterion_6() -> Outcome {
    const N: u64 = 100;
    let caps = Caps::default();
    let so3 = make_so(3).map_err(e2s)?;
    let so4 = make_so(4).map_err(e2s)?;
    let so5 = make_so(5).map_err(e2s)?;
    let su2 = make_su_realified(2).map_err(e2s)?;
    let g2 = make_g2().map_err(e2s)?;
    for seed in 0..N {
        let g = if seed % 2 == 0 { &so3 } else { &so4 };
        let m = g.rep_size().unwrap();
        let k = 1 + (seed as usize / 2) % 3;
        let deg = k + (seed as usize / 6) % (m - k + 1);
        let a = random_form(&mut rng(seed), m, deg);
        let xs: Vec<TaggedField> = (0..k)
            .map(|i| TaggedField::fundamental(g, random_multivector(&mut rng(1000 + 10 * seed + i as u64), g.dim(), 1)))
            .collect::<Result<_, _>>()
            .map_err(e2s)?;
        let res = multicartan_residual(g, &xs, &a).map_err(e2s)?;
        ensure(res.is_zero(), || format!("multi-Cartan residual nonzero: seed {seed}, {} k={k}", g.name()))?;
    }
    let pool = [&so3, &so4, &so5, &su2, &g2];
    for seed in 0..N {
        let g = pool[seed as usize % pool.len()];
        let k = (2 + (seed as usize / 5) % 3).min(g.dim());
        let p = random_multivector(&mut rng(seed), g.dim(), k);
        ensure(ce_boundary(g, &ce_boundary(g, &p)).is_zero(), || format!("∂² != 0 in {}", g.name()))?;
        let c = random_cochain(&mut rng(seed), g.dim(), k - 2);
        ensure(ce_differential(g, &ce_differential(g, &c)).is_zero(), || format!("δ² != 0 in {}", g.name()))?;
    }
    for seed in 0..N {
        let g = if seed % 2 == 0 { &so4 } else { &so5 };
        let k = 1 + (seed as usize / 2) % 3;
        let p = ce_boundary(g, &random_multivector(&mut rng(seed), g.dim(), k + 1));
        let f = find_primitive(g, &p, &caps)
            .map_err(e2s)?
            .ok_or_else(|| format!("boundary without primitive, seed {seed}"))?;
        ensure(ce_boundary(g, &f) == p, || format!("∂F(p) != p, seed {seed}"))?;
    }
    let algebras = constructed_algebras()?;
    for g in &algebras {
        ensure(g.jacobi_residual() == 0, || format!("Jacobi fails for {}", g.name()))?;
    }
    let g2_dim = algebras.last().unwrap().dim();
    ensure(g2_dim == 14, || format!("dim g2 = {g2_dim}"))?;
    Ok(format!("4 x {N} instances; Jacobi on {} algebras, dim g2 = 14", algebras.len()))
}

fn criterion_7() -> Outcome {
    let caps = Caps::default();
    let opts = VerifyOptions::default();
    for n in 3..=5 {
        let (m, f) = comoment_sorn(n, &caps).map_err(e2s)?;
        exact_zero(&verify_equivariance(&format!("sorn-{n}"), &f, &m, &opts).map_err(e2s)?)?;
    }
    let (m, f) = comoment_g2(&caps).map_err(e2s)?;
    exact_zero(&verify_equivariance("g2-s6", &f, &m, &opts).map_err(e2s)?)?;
    let (m, f) = comoment_sorn(3, &caps).map_err(e2s)?;
    let b = msk_core::algebra::Blade::single(0);
    let bumped = f.component(1, b).add(&DiffForm::dx(3, 0));
    let g = f.with_value(1, b, bumped).map_err(e2s)?;
    let r = verify_equivariance("perturbed", &g, &m, &opts).map_err(e2s)?;
    ensure(!r.passed(), || "perturbed comoment passes equivariance".into())?;
    Ok("sorn n=3..5 and g2 exact; perturbed f_1 fails".into())
}

fn msk(args: &[&str], env: &[(&str, &str)]) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_msk"));
    cmd.args(args).env_remove("MSK_MAX_DIM");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("run msk");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn criterion_8() -> Outcome {
    let schema = |s: &str| -> Result<jsonschema::Validator, String> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(e2s)?;
        jsonschema::validator_for(&v).map_err(e2s)
    };
    let homology = schema(include_str!("../../../docs/schemas/homology.schema.json"))?;
    let obstruction = schema(include_str!("../../../docs/schemas/obstruction.schema.json"))?;
    let verify = schema(include_str!("../../../docs/schemas/verify.schema.json"))?;
    let predict = schema(include_str!("../../../docs/schemas/predict.schema.json"))?;

    let mut runs: Vec<(Vec<String>, &jsonschema::Validator, i32)> = Vec::new();
    let mut add = |args: &[&str], v, code| runs.push((args.iter().map(|s| s.to_string()).collect(), v, code));
    add(&["homology", "--algebra", "so", "--n", "4", "--degrees", "1..3"], &homology, 0);
    add(&["homology", "--algebra", "so", "--n", "3", "--degrees", "3..3"], &homology, 0);
    add(&["homology", "--algebra", "g2", "--degrees", "0..2"], &homology, 0);
    for c in SPHERE_CASES {
        if c.obstruction {
            add(&["obstruction", "--case", c.id], &obstruction, 0);
        }
        add(&["predict", "--case", c.id], &predict, 0);
    }
    add(&["predict", "--case", "son-sphere", "--n", "7"], &predict, 0);
    add(&["predict", "--case", "sonp1-sphere", "--n", "3"], &predict, 0);
    add(&["predict", "--case", "sonp1-sphere", "--n", "4"], &predict, 0);
    add(&["verify", "--case", "sorn", "--n", "4"], &verify, 0);
    add(&["verify", "--case", "son-sphere", "--n", "3", "--samples", "25"], &verify, 0);
    add(&["verify", "--case", "g2-s6", "--equivariance"], &verify, 0);
    add(&["verify", "--case", "hopf-s3"], &verify, 0);
    add(&["verify", "--case", "f12-so", "--n", "5"], &verify, 0);
    add(&["verify", "--case", "sorn", "--n", "3", "--perturb"], &verify, 1);

    for (args, validator, code) in &runs {
        let argv: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
        let (c1, out1) = msk(&argv, &[]);
        let (c2, out2) = msk(&argv, &[]);
        let line = args.join(" ");
        ensure(c1 == *code && c2 == *code, || format!("`{line}` exited {c1}/{c2}, want {code}"))?;
        ensure(out1 == out2, || format!("`{line}` output differs between runs"))?;
        let json: serde_json::Value = serde_json::from_str(&out1).map_err(|e| format!("`{line}`: {e}"))?;
        let violation = validator
            .iter_errors(&json)
            .next()
            .map(|err| format!("`{line}`: schema violation at {}: {err}", err.instance_path()));
        if let Some(v) = violation {
            return Err(v);
        }
    }

    let usage: [(&[&str], &[(&str, &str)]); 5] = [
        (&["obstruction", "--case", "nope"], &[]),
        (&["verify", "--case", "nope"], &[]),
        (&["verify", "--case", "sorn"], &[]),
        (&["verify", "--case", "sorn", "--n", "3", "--tolerance", "1e-45"], &[]),
        (&["homology", "--algebra", "so", "--n", "5"], &[("MSK_MAX_DIM", "10")]),
    ];
    for (args, env) in usage {
        let (c, _) = msk(args, env);
        ensure(c == 2, || format!("`{}` exited {c}, want 2", args.join(" ")))?;
    }
    let (c, _) = msk(&["frobnicate"], &[]);
    ensure(c == 2, || format!("unknown subcommand exited {c}"))?;
    Ok(format!("{} commands schema-valid and byte-identical on rerun; exit codes 0/1/2", runs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("homology of so(n)", criterion_1, Duration::from_secs(600)),
        ("existence verdicts", criterion_2, Duration::from_secs(600)),
        ("symbolic primitives", criterion_3, Duration::from_secs(60)),
        ("exact comoment verification", criterion_4, Duration::from_secs(300)),
        ("numeric comoment verification", criterion_5, Duration::from_secs(300)),
        ("algebraic properties", criterion_6, Duration::from_secs(300)),
        ("equivariance", criterion_7, Duration::from_secs(60)),
        ("CLI contract", criterion_8, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= *budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over budget {}s", budget.as_secs())),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {}: {status} {name} ({:.1}s): {detail}", i + 1, elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
