//! End-to-end acceptance criteria; prints one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use bilinear_bsc::eoracle::{
    verify_local_basis, verify_eigenspace_identities, verify_with_atoms, AtomGram,
};
use bilinear_bsc::linalg::{ratio, RatMatrix, Rational};
use bilinear_bsc::local::bfs::{bfs_distance_audit, DEFAULT_BFS_LIMIT};
use bilinear_bsc::local::spectrum::{local_spectrum_check, local_spectrum_table};
use bilinear_bsc::local::{
    canonical_pair, triangle_spot_check, verify_partition, CrossMode, LocalContext, Which,
};
use bilinear_bsc::norton::heavy::{heavy_checks, HeavyOracle};
use bilinear_bsc::norton::{
    bbalanced_word_check, verify_generation, verify_norton_identities, verify_omega, NortonOps,
    DEFAULT_MAX_WORD,
};
use bilinear_bsc::params::{verify_closed_form_identities, ClosedForms, GraphParams};
use bilinear_bsc::report::{Report, Status};
use bilinear_bsc::smodel::{verify_s_model, SModel};
use num_bigint::BigInt;
use num_traits::One;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every named check is present in `r` and passed.
fn passed(r: &Report, names: &[&str]) -> Result<(), String> {
    for n in names {
        match r.get(n) {
            Some(c) if c.status == Status::Pass => {}
            Some(c) => {
                return Err(format!(
                    "{n}: {:?} {}",
                    c.status,
                    c.witness.clone().unwrap_or_default()
                ))
            }
            None => return Err(format!("{n}: not emitted")),
        }
    }
    Ok(())
}

fn no_failures(r: &Report) -> Result<(), String> {
    match r.failures().next() {
        Some(c) => Err(format!(
            "{}: {}",
            c.name,
            c.witness.clone().unwrap_or_default()
        )),
        None => Ok(()),
    }
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter()
        .map(|&x| Rational::from_integer(BigInt::from(x)))
        .collect()
}

struct Base {
    p: GraphParams,
    cf: ClosedForms,
    ctx: LocalContext,
    ops: NortonOps,
}

impl Base {
    fn new() -> Self {
        let p = GraphParams::new(3, 3, 7).unwrap();
        let cf = ClosedForms::new(&p, 2).unwrap();
        let (x, y) = canonical_pair(&p, 2).unwrap();
        let ctx = LocalContext::build(&p, x, y, CrossMode::Cached).unwrap();
        let model = SModel::from_closed_forms(&cf).unwrap();
        let ops = NortonOps::new(&model).unwrap();
        Self { p, cf, ctx, ops }
    }
}

fn parameter_suite(b: &Base) -> Outcome {
    let sp = &b.cf.spectrum;
    let theta: Vec<Rational> = (0..=3).map(|i| sp.t(i).clone()).collect();
    ensure(theta == ints(&[1040, 311, 68, -13]), || {
        format!("θ = {theta:?}")
    })?;
    ensure(b.cf.kappa == BigInt::from(1040), || {
        format!("κ = {}", b.cf.kappa)
    })?;
    ensure(b.cf.a1 == BigInt::from(103), || {
        format!("a_1 = {}", b.cf.a1)
    })?;
    let r = verify_closed_form_identities(&b.cf);
    passed(
        &r,
        &[
            "self-dual",
            "theta0-valency",
            "dim-ev",
            "three-term",
            "krein-q111",
            "intersection-sum",
        ],
    )?;
    no_failures(&r)?;
    Ok(format!("{} identities", r.len()))
}

fn bfs_audit(b: &Base) -> Outcome {
    let audit = bfs_distance_audit(&b.p, DEFAULT_BFS_LIMIT).map_err(|e| e.to_string())?;
    ensure(audit.vertex_count == 531_441, || {
        format!("|X| = {}", audit.vertex_count)
    })?;
    ensure(audit.rank_mismatches == 0 && audit.unreached == 0, || {
        format!("{:?}", audit.first_mismatch)
    })?;
    ensure(audit.sphere_sizes == audit.expected_sphere_sizes, || {
        format!("{:?}", audit.sphere_sizes)
    })?;
    ensure(audit.sphere_sizes[3] == 449_280, || {
        format!("|Γ_3| = {}", audit.sphere_sizes[3])
    })?;
    Ok(format!("spheres {:?}", audit.sphere_sizes))
}

fn partition_suite(b: &Base) -> Outcome {
    for w in [Which::X, Which::Y] {
        let sizes = b.ctx.class_sizes(w).to_vec();
        ensure(sizes == [12, 8, 12, 288, 72, 648], || {
            format!("{w:?} sizes {sizes:?}")
        })?;
    }
    let r = verify_partition(&b.ctx, &b.cf);
    let windows = [
        "local-d-k-2",
        "local-d-k-1",
        "local-d-k",
        "local-d-k+1",
        "local-d-k+2",
        "local-d-outside",
    ];
    passed(&r, &["local-class-sizes", "local-c-x", "local-c-y"])?;
    passed(&r, &windows)?;
    no_failures(&r)?;
    Ok("classes (12, 8, 12, 288, 72, 648)".into())
}

fn local_spectrum(b: &Base) -> Outcome {
    let mults: Vec<Rational> = local_spectrum_table(&b.p)
        .into_iter()
        .map(|(_, m)| m)
        .collect();
    ensure(mults == ints(&[1, 12, 39, 520, 468]), || {
        format!("table {mults:?}")
    })?;
    let r = local_spectrum_check(&b.ctx);
    passed(
        &r,
        &["local-annihilator", "local-traces", "local-multiplicities"],
    )?;
    Ok("multiplicities (1, 12, 39, 520, 468)".into())
}

fn strengthened_bsc(b: &Base) -> Outcome {
    let lambda = b.cf.tables.lambda.to_vec();
    ensure(lambda == ints(&[0, 2, 3, 72, 18, 216]), || {
        format!("λ = {lambda:?}")
    })?;
    let total: Rational = lambda.iter().sum();
    ensure(total == *b.cf.theta1(), || format!("Σλ = {total}"))?;
    let r = verify_eigenspace_identities(&b.ctx, &b.cf);
    let names: Vec<String> = (1..=6).map(|i| format!("strengthened-bsc-{i}")).collect();
    passed(&r, &names.iter().map(String::as_str).collect::<Vec<_>>())?;
    Ok("six classes, Σλ = 311".into())
}

fn eigenbasis_suite(b: &Base) -> Outcome {
    let m = &b.ops.model;
    let e = verify_eigenspace_identities(&b.ctx, &b.cf);
    passed(
        &e,
        &[
            "e-h-orthogonal",
            "e-hprime-orthogonal",
            "e-h-minus-hprime",
            "e-hcheck-one-zero",
        ],
    )?;
    let s = verify_s_model(m);
    passed(
        &s,
        &[
            "s-h-orthogonal",
            "s-h-minus-hprime",
            "s-sym-asym-dims",
            "s-decompose",
            "s-hcheck-sym-basis",
        ],
    )?;
    no_failures(&s)?;
    passed(&verify_closed_form_identities(&b.cf), &["gamma-mu"])?;
    let t = &b.cf.tables;
    let gm: Rational = (1..=6).map(|j| &t.gamma[j] * &t.mu[j]).sum();
    ensure(gm == -Rational::one(), || format!("Σγμ = {gm}"))?;
    let rank = m.rank(&m.h_check[1..]);
    ensure(rank == 5, || format!("rank h∨_2..h∨_6 = {rank}"))?;
    Ok("Gram, swap and decomposition identities".into())
}

fn norton_suite(b: &Base) -> Outcome {
    let m = &b.ops.model;
    let ev = ratio(-3, 531_441);
    ensure(b.ops.x_star(&m.omega) == m.omega.scaled(&ev), || {
        "Lx ω".into()
    })?;
    ensure(b.ops.y_star(&m.omega) == m.omega.scaled(&ev), || {
        "Ly ω".into()
    })?;
    let mut r = verify_norton_identities(&b.ops);
    r.extend(verify_omega(&b.ops));
    r.extend(verify_generation(&b.ops));
    passed(
        &r,
        &[
            "n-h-eigen",
            "n-hprime-eigen",
            "prop-omega-eigen",
            "n-sym-star-asym",
        ],
    )?;
    passed(&r, &["gen-x-family", "gen-y-family", "gen-b-family"])?;
    no_failures(&r)?;
    Ok("ω eigenvalue -3/531441, family ranks (5, 5, 4)".into())
}

fn word_check(b: &Base) -> Outcome {
    let r = bbalanced_word_check(&b.ops, DEFAULT_MAX_WORD);
    passed(
        &r,
        &[
            "thm-bbalanced",
            "word-swap-equivariance",
            "word-chart-independence",
        ],
    )?;
    let words = r
        .get("thm-bbalanced")
        .and_then(|c| c.witness.as_ref())
        .and_then(|w| w["words"].as_u64());
    ensure(words == Some(2046), || format!("words = {words:?}"))?;
    Ok("2046 words".into())
}

fn second_configuration() -> Outcome {
    let p = GraphParams::new(3, 4, 9).unwrap();
    for k in [2, 3] {
        let cf = ClosedForms::new(&p, k).map_err(|e| e.to_string())?;
        let (x, y) = canonical_pair(&p, k).map_err(|e| e.to_string())?;
        let ctx = LocalContext::build(&p, x, y, CrossMode::OnTheFly).map_err(|e| e.to_string())?;
        ensure(ctx.kappa() == 9680, || format!("κ = {}", ctx.kappa()))?;
        let model = SModel::from_closed_forms(&cf).map_err(|e| e.to_string())?;
        let ops = NortonOps::new(&model).map_err(|e| e.to_string())?;
        let mut r = verify_closed_form_identities(&cf);
        r.extend(verify_partition(&ctx, &cf));
        r.extend(triangle_spot_check(&ctx, 2000, k as u64));
        r.extend(verify_eigenspace_identities(&ctx, &cf));
        r.extend(verify_local_basis(&ctx, &cf, k as u64));
        r.extend(verify_s_model(&model));
        r.extend(verify_norton_identities(&ops));
        r.extend(verify_omega(&ops));
        r.extend(verify_generation(&ops));
        r.extend(bbalanced_word_check(&ops, DEFAULT_MAX_WORD));
        no_failures(&r).map_err(|e| format!("k = {k}: {e}"))?;
        passed(
            &r,
            &[
                "local-class-sizes",
                "local-c-x",
                "local-d-k",
                "strengthened-bsc-4",
                "thm-bbalanced",
            ],
        )?;
    }
    Ok("k = 2, 3 with κ = 9680".into())
}

fn heavy_calibration(b: &Base) -> Outcome {
    let oracle = HeavyOracle::build(&b.ctx, None).map_err(|e| e.to_string())?;
    let r = heavy_checks(&oracle, &b.ops, &b.ctx, 7);
    passed(&r, &["heavy-calibration", "heavy-xy-sym", "heavy-direct"])?;
    no_failures(&r)?;
    Ok("five test vectors".into())
}

/// Checks run against a closed-form table that may have been perturbed.
fn suite(b: &Base, gram: &AtomGram, cf: &ClosedForms) -> Report {
    let mut r = verify_closed_form_identities(cf);
    r.extend(verify_partition(&b.ctx, cf));
    r.extend(verify_with_atoms(gram, cf));
    match SModel::from_closed_forms(cf) {
        Ok(m) => {
            r.extend(verify_s_model(&m));
            match NortonOps::new(&m) {
                Ok(ops) => r.extend(verify_norton_identities(&ops)),
                Err(e) => r.fail(
                    "n-operators",
                    "Lx ŷ = Ly x̂",
                    serde_json::json!(e.to_string()),
                ),
            }
        }
        Err(e) => r.fail(
            "s-model-build",
            "T invertible",
            serde_json::json!(e.to_string()),
        ),
    }
    r
}

fn negative_controls(b: &Base) -> Outcome {
    let gram = AtomGram::build(&b.ctx);
    no_failures(&suite(b, &gram, &b.cf)).map_err(|e| format!("unperturbed: {e}"))?;
    let mut cases: Vec<(String, ClosedForms)> = Vec::new();
    let bump = |m: &mut RatMatrix, i: usize, j: usize| m[(i, j)] += Rational::one();
    for i in 0..6 {
        for j in 0..6 {
            let mut cf = b.cf.clone();
            bump(&mut cf.c, i, j);
            cases.push((format!("C[{i}][{j}]"), cf));
            let mut cf = b.cf.clone();
            bump(&mut cf.h, i, j);
            cases.push((format!("H[{i}][{j}]"), cf));
        }
        let mut cf = b.cf.clone();
        cf.tables.lambda[i + 1] += Rational::one();
        cases.push((format!("λ_{}", i + 1), cf));
        let mut cf = b.cf.clone();
        cf.tables.mu[i + 1] += Rational::one();
        cases.push((format!("μ_{}", i + 1), cf));
    }
    for (label, cf) in &cases {
        let r = suite(b, &gram, cf);
        let caught = r.failures().any(|c| c.witness.is_some());
        ensure(caught, || format!("perturbing {label} went unnoticed"))?;
    }
    Ok(format!("{} perturbations caught", cases.len()))
}

fn main() -> ExitCode {
    let t0 = Instant::now();
    let base = Base::new();
    eprintln!("base context built in {:.1} s", t0.elapsed().as_secs_f64());

    let criteria: Vec<Criterion> = vec![
        ("parameter suite", Box::new(|| parameter_suite(&base))),
        ("BFS distance audit", Box::new(|| bfs_audit(&base))),
        ("local partition suite", Box::new(|| partition_suite(&base))),
        ("local spectrum", Box::new(|| local_spectrum(&base))),
        (
            "strengthened balanced set condition",
            Box::new(|| strengthened_bsc(&base)),
        ),
        (
            "eigenbasis and decomposition suite",
            Box::new(|| eigenbasis_suite(&base)),
        ),
        ("Norton operator suite", Box::new(|| norton_suite(&base))),
        ("balanced word check", Box::new(|| word_check(&base))),
        (
            "second configuration (3, 4, 9)",
            Box::new(second_configuration),
        ),
        (
            "heavy-mode calibration",
            Box::new(|| heavy_calibration(&base)),
        ),
        ("negative controls", Box::new(|| negative_controls(&base))),
    ];

    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!(
                "criterion {:>2} PASS  {name}: {detail} ({secs:.1} s)",
                i + 1
            ),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.1} s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
