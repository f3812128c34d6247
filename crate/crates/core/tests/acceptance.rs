//! Acceptance criteria 1-11. Runs as a plain binary so every criterion prints
//! one line whether it passes or not; exits non-zero if any fails.

use std::f64::consts::PI;
use std::fs;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use ricci_compare::cli::gallery::Builtin;
use ricci_compare::comparison::*;
use ricci_compare::error::Error;
use ricci_compare::model_functions::{closed_form_constant, solve_jacobi, KappaProfile, ModelFunctions};
use ricci_compare::model_manifold::{shared, ModelManifold};
use ricci_compare::radial::Polynomial;
use ricci_compare::rigidity::{
    build_cheng_model, build_cheng_model_with, symmetric_bump_kappa, verify_equality_case, verify_pole_smoothness,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e(err: Error) -> String {
    err.to_string()
}

fn within(limit: f64, elapsed: Duration) -> Result<(), String> {
    ensure(
        elapsed.as_secs_f64() < limit,
        format!("took {:.2} s, limit {limit} s", elapsed.as_secs_f64()),
    )
}

fn manifold(b: Builtin, m: f64) -> ModelManifold {
    b.build(3, m, None).expect("builtin builds").manifold
}

fn euclidean(m: f64) -> ModelManifold {
    manifold(Builtin::Euclidean { r_max: 10.0 }, m)
}

fn sphere() -> ModelManifold {
    manifold(Builtin::Sphere { curvature: 1.0 }, 1.0)
}

fn hyperbolic() -> ModelManifold {
    manifold(Builtin::Hyperbolic { r_max: 5.0 }, 0.0)
}

fn gaussian() -> ModelManifold {
    manifold(Builtin::Gaussian { a: 1.0, r_max: 100.0 }, 0.0)
}

fn constant(mm: &ModelManifold, k: f64) -> Result<ModelFunctions, String> {
    model_functions_for(mm, &KappaProfile::constant(k).map_err(e)?, 1e-12).map_err(e)
}

/// `(label, manifold, kappa, radius)`
fn gallery() -> Vec<(&'static str, ModelManifold, f64, f64)> {
    vec![
        ("euclidean m=0", euclidean(0.0), 0.0, 5.0),
        ("euclidean m=-1", euclidean(-1.0), 0.0, 5.0),
        ("euclidean m=1", euclidean(1.0), 0.0, 5.0),
        ("sphere m=1", sphere(), 1.0, PI),
        ("hyperbolic m=0", hyperbolic(), -1.0, 5.0),
        ("gaussian m=0", gaussian(), 1.0 / 3.0, 5.0),
    ]
}

fn sk_closed(k: f64, s: f64) -> f64 {
    closed_form_constant(k, s).map(|p| p.0).unwrap_or(f64::NAN)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for k in [-4.0, -1.0, 0.0, 1.0, 4.0] {
        let s_max = 3.0;
        let mf = solve_jacobi(KappaProfile::constant(k).map_err(e)?, s_max, 1e-10).map_err(e)?;
        let end = if k > 0.0 { s_max.min(0.99 * PI / f64::sqrt(k)) } else { s_max };
        for i in 0..1000 {
            let s = end * i as f64 / 999.0;
            worst = worst.max((mf.sk(s).map_err(e)? - sk_closed(k, s)).abs());
        }
    }
    ensure(worst <= 1e-8, format!("max |sk - closed form| = {worst:e}"))?;
    let d1 = solve_jacobi(KappaProfile::constant(1.0).map_err(e)?, 3.3, 1e-10).map_err(e)?.delta();
    let d3 = solve_jacobi(KappaProfile::constant(1.0 / 3.0).map_err(e)?, 5.6, 1e-10).map_err(e)?.delta();
    ensure((d1 - PI).abs() <= 1e-10, format!("delta_1 = {d1}"))?;
    ensure((d3 - PI * 3f64.sqrt()).abs() <= 1e-10, format!("delta_1/3 = {d3}"))?;
    within(1.0, start.elapsed())?;
    Ok(format!(
        "max error {worst:.1e}, delta_1 error {:.1e}, delta_1/3 error {:.1e}",
        (d1 - PI).abs(),
        (d3 - PI * 3f64.sqrt()).abs()
    ))
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0_f64;
    for k in [1.0, -1.0] {
        let end = if k > 0.0 { 0.9 * PI } else { 4.0 };
        let a = solve_jacobi(KappaProfile::constant(k).map_err(e)?, 1.01 * end, 1e-10).map_err(e)?;
        for alpha in [0.5, 2.0, 3.0] {
            let b = solve_jacobi(KappaProfile::constant(alpha * alpha * k).map_err(e)?, 1.01 * end / alpha, 1e-10)
                .map_err(e)?;
            for i in 0..200 {
                let s = 0.01 + (end - 0.01) * i as f64 / 199.0;
                let lhs = a.cot_kappa(s).map_err(e)?;
                let rhs = b.cot_kappa(s / alpha).map_err(e)? / alpha;
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    ensure(worst <= 1e-8, format!("max scaling defect {worst:e}"))?;
    Ok(format!("max scaling defect {worst:.1e}"))
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0_f64;
    let mut profiles = vec![KappaProfile::constant(1.0).map_err(e)?];
    for c in [0.1, -0.05, 0.2] {
        profiles.push(symmetric_bump_kappa(c).map_err(e)?);
    }
    for k in profiles {
        let horizon = k.symmetric_about().unwrap_or(PI) * 1.05;
        let mf = solve_jacobi(k, horizon, 1e-12).map_err(e)?;
        let delta = mf.delta();
        worst = worst.max((mf.sk_prime(delta).map_err(e)? + 1.0).abs());
        worst = worst.max(mf.sk_prime(delta / 2.0).map_err(e)?.abs());
        for i in 0..=200 {
            let s = delta * i as f64 / 200.0;
            worst = worst.max((mf.sk(s).map_err(e)? - mf.sk((delta - s).max(0.0)).map_err(e)?).abs());
        }
    }
    ensure(worst <= 1e-8, format!("max symmetry defect {worst:e}"))?;
    Ok(format!("max symmetry defect {worst:.1e} over kappa = 1 and three bumps"))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mm = sphere();
    let mf = constant(&mm, 1.0)?;
    let grid = default_grid(&mm, PI, 2000).map_err(e)?;
    let scaled = |m: f64, scale: f64| m.abs() / (1.0 + scale.abs());

    let lap = check_laplacian_comparison_on(&mm, &mf, &grid, Slack::DEFAULT).map_err(e)?;
    ensure(lap.verdict.is_pass(), format!("laplacian: {}", lap.verdict))?;
    let mut lap_dev = 0.0_f64;
    let mut ein_dev = 0.0_f64;
    for (i, &r) in grid.iter().enumerate() {
        lap_dev = lap_dev.max(scaled(lap.conclusion_margin[i], 2.0 / r.tan()));
        ein_dev = ein_dev.max(lap.hypothesis_margin[i].abs());
    }
    let vol = check_volume_element_on(&mm, &mf, &grid, Slack::DEFAULT).map_err(e)?;
    ensure(vol.verdict.is_pass(), format!("volume element: {}", vol.verdict))?;
    let vol_dev = vol.diagnostics["max_abs_log_ratio_deviation"];
    let mut bg_dev = 0.0_f64;
    for rep in [
        check_bg_s(&mm, &mf, &grid, Slack::MONOTONE_RATIO).map_err(e)?,
        check_bg_r(&mm, &mf, &grid, Slack::MONOTONE_RATIO).map_err(e)?,
    ] {
        ensure(rep.verdict.is_pass(), format!("{}: {}", rep.check_name, rep.verdict))?;
        bg_dev = bg_dev
            .max((rep.diagnostics["ratio_min"] - 1.0).abs())
            .max((rep.diagnostics["ratio_max"] - 1.0).abs());
    }
    for (name, dev) in [("laplacian", lap_dev), ("einstein", ein_dev), ("volume element", vol_dev), ("bishop-gromov", bg_dev)] {
        ensure(dev <= 1e-8, format!("{name} deviation {dev:e}"))?;
    }
    within(1.0, start.elapsed())?;
    Ok(format!(
        "deviations: laplacian {lap_dev:.1e}, einstein {ein_dev:.1e}, volume element {vol_dev:.1e}, ratio {bg_dev:.1e}"
    ))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mm = gaussian();
    let k = find_best_constant_kappa(&mm, 5.0, DEFAULT_GRID_SIZE).map_err(e)?;
    ensure((k - 1.0 / 3.0).abs() <= 1e-6, format!("best kappa {k}"))?;
    let mf = constant(&mm, 1.0 / 3.0)?;
    let lap = check_laplacian_comparison(&mm, &mf, 5.0, DEFAULT_GRID_SIZE).map_err(e)?;
    ensure(lap.verdict.is_pass(), format!("laplacian: {}", lap.verdict))?;
    let myers = check_myers(&mm, &mf, Slack::DEFAULT).map_err(e)?;
    ensure(myers.verdict.is_pass(), format!("myers: {}", myers.verdict))?;
    let sup = myers.diagnostics["sup_s_p"];
    let delta = myers.diagnostics["delta"];
    ensure((sup - (3.0 * PI).sqrt() / 2.0).abs() <= 1e-6, format!("sup s_p = {sup}"))?;
    ensure(sup < delta && (delta - PI * 3f64.sqrt()).abs() <= 1e-10, format!("delta = {delta}"))?;
    let horizons = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0];
    let vm = check_vm_completeness(&mm, &horizons).map_err(e)?;
    ensure(vm.classification == Classification::Convergent, format!("vm: {:?}", vm.classification))?;
    let amb = check_ambrose(&mm, &horizons).map_err(e)?;
    ensure(
        amb.integral.classification == Classification::Divergent && amb.compactness == Compactness::NotImplied,
        format!("ambrose: {:?}, {:?}", amb.integral.classification, amb.compactness),
    )?;
    within(5.0, start.elapsed())?;
    Ok(format!(
        "kappa* = {k:.9}, sup s_p = {sup:.9}, delta = {delta:.9}, vm convergent, ambrose (divergent, not implied)"
    ))
}

fn criterion_6() -> Outcome {
    // most negative margin as a fraction of the allowed slack; > -1 means inside the slack
    let mut worst_slack_use = f64::INFINITY;
    for (name, mm, k, radius) in gallery() {
        let mf = constant(&mm, k)?;
        let grid = default_grid(&mm, radius, DEFAULT_GRID_SIZE).map_err(e)?;
        for rep in [
            check_bg_s(&mm, &mf, &grid, Slack::MONOTONE_RATIO).map_err(e)?,
            check_bg_r(&mm, &mf, &grid, Slack::MONOTONE_RATIO).map_err(e)?,
        ] {
            ensure(rep.verdict.is_pass(), format!("{name} {}: {}", rep.check_name, rep.verdict))?;
            for (m, t) in rep.conclusion_margin.iter().zip(&rep.conclusion_slack) {
                worst_slack_use = worst_slack_use.min(m / t);
            }
        }
    }
    let mm = euclidean(0.0);
    let mf = constant(&mm, 0.0)?;
    let grid = default_grid(&mm, 5.0, DEFAULT_GRID_SIZE).map_err(e)?;
    let rep = check_bg_s(&mm, &mf, &grid, Slack::MONOTONE_RATIO).map_err(e)?;
    let mut closed = 0.0_f64;
    for row in &rep.table.as_ref().ok_or("no table")?.rows {
        let want = 4.0 / (3.0 * row[1]);
        closed = closed.max((row[4] - want).abs() / want);
    }
    ensure(closed <= 1e-8, format!("4/(3s) relative error {closed:e}"))?;
    Ok(format!(
        "12 ratio checks monotone (min margin/slack {worst_slack_use:.3}), 4/(3s) error {closed:.1e}"
    ))
}

fn criterion_7() -> Outcome {
    let pairs = [(1.0, 2.0), (1.0, 4.0), (2.0, 3.0)];
    let mut min_margin = f64::INFINITY;
    for (name, mm) in [("euclidean", euclidean(0.0)), ("gaussian", gaussian())] {
        let rep = check_ball_growth(&mm, &pairs, Slack::DEFAULT).map_err(e)?;
        ensure(rep.verdict.is_pass(), format!("{name}: {}", rep.verdict))?;
        for m in &rep.conclusion_margin {
            ensure(*m >= 0.0, format!("{name}: negative log margin {m}"))?;
            min_margin = min_margin.min(*m);
        }
    }
    Ok(format!("smallest log margin {min_margin:.6}"))
}

fn criterion_8() -> Outcome {
    let mut worst = 0.0_f64;
    let mut count = 0;
    for (name, mm, _, radius) in gallery() {
        let grid = default_grid(&mm, radius, DEFAULT_GRID_SIZE).map_err(e)?;
        let hyp = check_ricci_hypothesis_on(&mm, &KappaProfile::constant(0.0).map_err(e)?, &grid, Slack::DEFAULT)
            .map_err(e)?;
        if !hyp.verdict.is_pass() {
            continue;
        }
        count += 1;
        let a = check_kappa0_bound_on(&mm, &grid, Slack::DEFAULT).map_err(e)?;
        let b = check_laplacian_comparison_on(&mm, &constant(&mm, 0.0)?, &grid, Slack::DEFAULT).map_err(e)?;
        ensure(a.verdict.is_pass() && b.verdict.is_pass(), format!("{name}: {} / {}", a.verdict, b.verdict))?;
        for i in 0..grid.len() {
            let (x, y) = (a.conclusion_margin[i], b.conclusion_margin[i]);
            worst = worst.max((x - y).abs() / (1.0 + x.abs().max(y.abs())));
        }
    }
    ensure(count == 5, format!("expected 5 manifolds with Ric >= 0, found {count}"))?;
    ensure(worst <= 1e-10, format!("max disagreement {worst:e}"))?;
    Ok(format!("{count} manifolds, max disagreement {worst:.1e}"))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let phi = shared(Polynomial(vec![0.0, 0.0, 0.05]));
    let kappa = KappaProfile::constant(1.0).map_err(e)?;
    let model = build_cheng_model(3, &kappa, phi).map_err(e)?;
    let s_end = model.s_of_r(model.r_end);
    ensure((s_end - PI).abs() <= 1e-8, format!("s(r_end) = {s_end}"))?;
    let rep = verify_equality_case(&model, DEFAULT_GRID_SIZE).map_err(e)?;
    let pole = verify_pole_smoothness(&model).map_err(e)?;
    let fp = pole["f_prime_at_0_difference"];
    ensure((fp - 1.0).abs() <= 1e-8, format!("f'(0) = {fp}"))?;
    let perturbed = model.with_perturbed_warp(1e-3).map_err(e)?;
    ensure(
        matches!(verify_equality_case(&perturbed, DEFAULT_GRID_SIZE), Err(Error::EqualityViolated { .. })),
        "perturbed warp accepted",
    )?;
    let shifted = shared(Polynomial(vec![-0.3, 0.0, 0.05]));
    let wrong = build_cheng_model_with(3, &kappa, shifted, Some(1.0)).map_err(e)?;
    ensure(
        matches!(verify_pole_smoothness(&wrong), Err(Error::PoleDefect(_))),
        "wrong normalization accepted",
    )?;
    within(5.0, start.elapsed())?;
    let dev = ["laplacian", "einstein", "metric"]
        .iter()
        .map(|k| rep.diagnostics[&format!("max_rel_deviation_{k}")])
        .fold(0.0, f64::max);
    Ok(format!(
        "r_end = {:.12}, |s(r_end) - pi| = {:.1e}, equality deviation {dev:.1e}, f'(0) - 1 = {:.1e}, controls rejected",
        model.r_end,
        (s_end - PI).abs(),
        fp - 1.0
    ))
}

fn criterion_10() -> Outcome {
    let mut lines = Vec::new();
    let mut cases: Vec<(String, ModelManifold, f64, bool)> = gallery()
        .into_iter()
        .map(|(name, mm, _, radius)| {
            let rigid = mm.m() == 1.0;
            (name.to_string(), mm, radius, rigid)
        })
        .collect();
    let model = build_cheng_model(3, &KappaProfile::constant(1.0).map_err(e)?, shared(Polynomial(vec![0.0, 0.0, 0.05])))
        .map_err(e)?;
    cases.push(("cheng m=1".into(), model.base.clone(), model.r_end, true));
    for m in [0.0, -1.0] {
        cases.push((format!("cheng at m={m}"), model.base.with_m(m).map_err(e)?, model.r_end, false));
    }
    let mut worst = f64::INFINITY;
    for (name, mm, radius, rigid) in cases {
        let k = find_best_constant_kappa(&mm, radius, DEFAULT_GRID_SIZE).map_err(e)?;
        let rep = check_riccati_inequality(&mm, radius, DEFAULT_GRID_SIZE).map_err(e)?;
        ensure(rep.verdict.is_pass(), format!("{name}: {}", rep.verdict))?;
        let scaled = rep
            .conclusion_margin
            .iter()
            .zip(&rep.conclusion_slack)
            .map(|(m, t)| m / (t / Slack::FINITE_DIFFERENCE.abs))
            .fold(f64::INFINITY, f64::min);
        ensure(scaled >= -1e-6, format!("{name}: scaled margin {scaled:e}"))?;
        worst = worst.min(scaled);
        let equality = rep.diagnostics["equality"] == 1.0;
        ensure(equality == rigid, format!("{name}: equality = {equality}, expected {rigid}"))?;
        lines.push(format!("{name} (kappa* {k:.4}): {}", if equality { "equality" } else { "strict" }));
    }
    Ok(format!("min scaled margin {worst:.1e}; {}", lines.join(", ")))
}

fn criterion_11() -> Outcome {
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_ricci-compare");
    let dir = std::env::temp_dir().join(format!("ricci-compare-acceptance-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).map_err(|x| x.to_string())?;
    let names = ["euclidean", "sphere", "hyperbolic", "gaussian", "log-weight", "cheng-model"];
    let mut compared = 0;
    for name in names {
        let config = dir.join(format!("{name}.json"));
        fs::write(&config, format!(r#"{{"manifold": {{"builtin": {{"name": "{name}"}}}}, "n": 3}}"#))
            .map_err(|x| x.to_string())?;
        for round in ["a", "b"] {
            let out = dir.join(round).join(name);
            let status = Command::new(bin)
                .arg("run")
                .arg(&config)
                .arg("--out")
                .arg(&out)
                .output()
                .map_err(|x| x.to_string())?;
            ensure(status.status.code() == Some(0), format!("{name}: exit {:?}", status.status.code()))?;
        }
        for entry in fs::read_dir(dir.join("a").join(name)).map_err(|x| x.to_string())? {
            let file = entry.map_err(|x| x.to_string())?.file_name();
            if !file.to_string_lossy().ends_with(".csv") {
                continue;
            }
            let a = fs::read(dir.join("a").join(name).join(&file)).map_err(|x| x.to_string())?;
            let b = fs::read(dir.join("b").join(name).join(&file)).map_err(|x| x.to_string())?;
            ensure(a == b, format!("{name}/{} differs", file.to_string_lossy()))?;
            compared += 1;
        }
    }
    let _ = fs::remove_dir_all(&dir);
    within(60.0, start.elapsed())?;
    Ok(format!("{compared} CSV files identical across two runs of the 6-builtin gallery"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("constant-kappa oracle", criterion_1),
        ("scaling property", criterion_2),
        ("symmetric Jacobi", criterion_3),
        ("round-sphere rigidity", criterion_4),
        ("gaussian model", criterion_5),
        ("bishop-gromov monotonicity", criterion_6),
        ("ball growth", criterion_7),
        ("kappa = 0 consistency", criterion_8),
        ("cheng construction", criterion_9),
        ("riccati inequality", criterion_10),
        ("determinism", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {secs:>7.2}s  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {secs:>7.2}s  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
