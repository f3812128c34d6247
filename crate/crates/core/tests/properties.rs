use std::f64::consts::PI;

use proptest::prelude::*;
use ricci_compare::cli::gallery::Builtin;
use ricci_compare::comparison::*;
use ricci_compare::model_functions::{closed_form_constant, solve_jacobi, KappaProfile};
use ricci_compare::model_manifold::{shared, ModelManifold};
use ricci_compare::radial::Polynomial;
use ricci_compare::rigidity::{build_cheng_model, symmetric_bump_kappa};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn gaussian(a: f64) -> ModelManifold {
    Builtin::Gaussian { a, r_max: 20.0 }.build(3, 0.0, None).unwrap().manifold
}

fn sk_closed(k: f64, s: f64) -> f64 {
    if k > 0.0 {
        (k.sqrt() * s).sin() / k.sqrt()
    } else if k < 0.0 {
        ((-k).sqrt() * s).sinh() / (-k).sqrt()
    } else {
        s
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn solver_matches_closed_forms(k in -4.0f64..4.0) {
        let s_max = 3.0;
        let mf = solve_jacobi(KappaProfile::constant(k).unwrap(), s_max, 1e-10).unwrap();
        let end = if k > 0.0 { s_max.min(0.99 * PI / k.sqrt()) } else { s_max };
        for i in 0..1000 {
            let s = end * i as f64 / 999.0;
            let got = mf.sk(s).unwrap();
            prop_assert!((got - sk_closed(k, s)).abs() <= 1e-8, "kappa {k}, s {s}");
        }
        if k > 0.0 {
            let (_, cot) = closed_form_constant(k, 0.5).unwrap();
            prop_assert!((mf.cot_kappa(0.5).unwrap() - cot).abs() <= 1e-8);
        }
    }

    #[test]
    fn cot_scaling(k in -1.5f64..1.5, alpha in 0.5f64..3.0, t in 0.05f64..0.8) {
        // a_k(s) = a_{alpha^2 k}(s/alpha) / alpha
        let limit = if k > 0.0 { PI / k.sqrt() } else { 4.0 };
        let s = t * limit;
        let a = solve_jacobi(KappaProfile::constant(k).unwrap(), 1.01 * s, 1e-10).unwrap();
        let b = solve_jacobi(KappaProfile::constant(alpha * alpha * k).unwrap(), 1.01 * s / alpha, 1e-10).unwrap();
        let lhs = a.cot_kappa(s).unwrap();
        let rhs = b.cot_kappa(s / alpha).unwrap() / alpha;
        prop_assert!((lhs - rhs).abs() <= 1e-8 * lhs.abs().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn cot_is_non_increasing(c0 in 0.0f64..2.0, c1 in 0.0f64..1.0, c2 in 0.0f64..0.5, mut pts in prop::collection::vec(0.0f64..1.0, 2..40)) {
        let k = KappaProfile::polynomial(vec![c0, c1, c2], 10.0).unwrap();
        let mf = solve_jacobi(k, 10.0, 1e-10).unwrap();
        let end = mf.delta().min(10.0);
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let values: Vec<f64> = pts.iter().map(|t| mf.cot_kappa(1e-3 + t * 0.99 * (end - 1e-3)).unwrap()).collect();
        for w in values.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12 * w[0].abs().max(1.0));
        }
    }

    #[test]
    fn riccati_residual(c0 in -1.0f64..2.0, c1 in -0.5f64..0.5, t in 0.05f64..0.8) {
        let k = KappaProfile::polynomial(vec![c0, c1], 6.0).unwrap();
        let mf = solve_jacobi(k.clone(), 6.0, 1e-10).unwrap();
        let s = t * mf.delta().min(6.0);
        let h = 1e-4;
        let d = (mf.cot_kappa(s + h).unwrap() - mf.cot_kappa(s - h).unwrap()) / (2.0 * h);
        let a = mf.cot_kappa(s).unwrap();
        let residual = -d - k.eval(s).unwrap() - a * a;
        prop_assert!(residual.abs() <= 1e-6 * (1.0 + a * a), "residual {residual} at s {s}");
    }
}

proptest! {
    #![proptest_config(config(6))]

    #[test]
    fn symmetric_profiles(c in -0.1f64..0.2) {
        let k = symmetric_bump_kappa(c).unwrap();
        let delta = k.symmetric_about().unwrap();
        let mf = solve_jacobi(k, 1.05 * delta, 1e-12).unwrap();
        prop_assert!((mf.delta() - delta).abs() < 1e-10);
        prop_assert!((mf.sk_prime(delta).unwrap() + 1.0).abs() <= 1e-8);
        prop_assert!(mf.sk_prime(delta / 2.0).unwrap().abs() <= 1e-8);
        for i in 0..=100 {
            let s = delta * i as f64 / 100.0;
            prop_assert!((mf.sk(s).unwrap() - mf.sk((delta - s).max(0.0)).unwrap()).abs() <= 1e-8);
        }
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn s_p_round_trip(a in 0.2f64..2.0, t in 0.0f64..0.999) {
        let mm = gaussian(a);
        let s = t * mm.s_max();
        let r = mm.invert_s(s).unwrap();
        prop_assert!((mm.s_p(r).unwrap() - s).abs() <= 1e-10 * s.max(1.0));
    }

    #[test]
    fn chain_rule_and_sandwich(a in 0.2f64..2.0, r in 0.05f64..6.0) {
        let mm = gaussian(a);
        let h = 1e-4;
        let d = (mm.s_p(r + h).unwrap() - mm.s_p(r - h).unwrap()) / (2.0 * h);
        prop_assert!((d - mm.s_p_derivative(r).unwrap()).abs() <= 1e-7);
        let q = mm.nm();
        let s = mm.s_p(r).unwrap();
        let lo = mm.c_p() * (-2.0 * mm.phi_upper(r).unwrap() / q).exp() * r;
        let hi = mm.c_p() * (-2.0 * mm.phi_lower(r).unwrap() / q).exp() * r;
        prop_assert!(lo <= s * (1.0 + 1e-12) && s <= hi * (1.0 + 1e-12));
    }

    #[test]
    fn log_derivative_identities(a in 0.2f64..2.0, r in 0.05f64..4.0) {
        let mm = gaussian(a);
        let h = 1e-4;
        let (jp, jvp) = mm.volume_element(r + h).unwrap();
        let (jm, jvm) = mm.volume_element(r - h).unwrap();
        let dlogj = (jp.ln() - jm.ln()) / (2.0 * h);
        prop_assert!((dlogj - mm.laplacian_r(r).unwrap()).abs() <= 1e-6 * (1.0 + dlogj.abs()));
        let ds = mm.s_p(r + h).unwrap() - mm.s_p(r - h).unwrap();
        let dlogjv = (jvp.ln() - jvm.ln()) / ds;
        let lam = mm.lambda(r).unwrap();
        prop_assert!((dlogjv - lam).abs() <= 1e-6 * (1.0 + lam.abs()));
    }

    #[test]
    fn hypothesis_is_monotone_in_kappa(k1 in -1.0f64..0.5, gap in 0.0f64..1.0) {
        let mm = gaussian(1.0);
        let grid = default_grid(&mm, 5.0, 400).unwrap();
        let high = check_ricci_hypothesis_on(&mm, &KappaProfile::constant(k1).unwrap(), &grid, Slack::DEFAULT).unwrap();
        let low = check_ricci_hypothesis_on(&mm, &KappaProfile::constant(k1 - gap).unwrap(), &grid, Slack::DEFAULT).unwrap();
        if high.verdict.is_pass() {
            prop_assert!(low.verdict.is_pass());
        }
        for (a, b) in low.hypothesis_margin.iter().zip(&high.hypothesis_margin) {
            prop_assert!(a >= b);
        }
    }

    #[test]
    fn model_laplacian_is_monotone_in_kappa(k1 in 0.0f64..2.0, gap in 0.0f64..1.0, t in 0.01f64..0.95) {
        let k2 = k1 + gap;
        let s = t * PI / k2.sqrt().max(0.5);
        let a = solve_jacobi(KappaProfile::constant(k1).unwrap(), 1.01 * s, 1e-10).unwrap();
        let b = solve_jacobi(KappaProfile::constant(k2).unwrap(), 1.01 * s, 1e-10).unwrap();
        prop_assert!(b.m_kappa(s, 3, 0.0).unwrap() <= a.m_kappa(s, 3, 0.0).unwrap() + 1e-10);
    }

    #[test]
    fn violations_only_under_the_hypothesis(k in -1.0f64..1.0) {
        let mm = gaussian(1.0);
        let mf = model_functions_for(&mm, &KappaProfile::constant(k).unwrap(), 1e-10).unwrap();
        let grid = default_grid(&mm, 3.0, 300).unwrap();
        for rep in [
            check_laplacian_comparison_on(&mm, &mf, &grid, Slack::DEFAULT),
            check_volume_element_on(&mm, &mf, &grid, Slack::DEFAULT),
        ] {
            let Ok(rep) = rep else { continue };
            if let Verdict::ConclusionViolated { .. } = rep.verdict {
                for (m, t) in rep.hypothesis_margin.iter().zip(&rep.hypothesis_slack) {
                    prop_assert!(*m >= -t);
                }
            }
            if rep.first_hypothesis_failure().is_none() {
                prop_assert!(rep.verdict.is_pass(), "{}", rep.verdict);
            }
        }
    }
}

#[test]
fn reports_are_bitwise_deterministic() {
    let mm = gaussian(1.0);
    let mf = model_functions_for(&mm, &KappaProfile::constant(1.0 / 3.0).unwrap(), 1e-10).unwrap();
    let grid = default_grid(&mm, 5.0, 500).unwrap();
    let a = check_bg_r(&mm, &mf, &grid, Slack::MONOTONE_RATIO).unwrap();
    let b = check_bg_r(&mm, &mf, &grid, Slack::MONOTONE_RATIO).unwrap();
    let bits = |r: &ComparisonReport| r.conclusion_margin.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&a), bits(&b));
}

#[test]
fn m_below_one_makes_riccati_strict_on_the_rigid_model() {
    let model = build_cheng_model(3, &KappaProfile::constant(1.0).unwrap(), shared(Polynomial(vec![0.0, 0.0, 0.05]))).unwrap();
    let rigid = check_riccati_inequality(&model.base, model.r_end, 1000).unwrap();
    assert_eq!(rigid.diagnostics["equality"], 1.0);
    for m in [0.0, -1.0] {
        let mm = model.base.with_m(m).unwrap();
        let rep = check_riccati_inequality(&mm, model.r_end, 1000).unwrap();
        assert!(rep.verdict.is_pass());
        assert_eq!(rep.diagnostics["equality"], 0.0, "m = {m}");
    }
}
