use rayon::prelude::*;

use super::report::{ComparisonReport, Slack, Verdict};
use super::{default_grid, DEFAULT_GRID_SIZE};
use crate::error::{Error, Result};
use crate::model_functions::{KappaProfile, ModelFunctions};
use crate::model_manifold::ModelManifold;

/// Distances below `delta_kappa` at which the blow-up of `Delta_V r_p` is sampled.
pub const BLOWUP_EPSILONS: [f64; 3] = [1e-2, 1e-3, 1e-4];

struct RicciPoint {
    s: f64,
    lhs: f64,
    rhs: f64,
}

fn ricci_point(mm: &ModelManifold, kappa: &KappaProfile, r: f64) -> Result<RicciPoint> {
    let s = mm.s_p(r)?;
    let q = mm.nm();
    let lhs = mm.modified_ricci_radial(r)?;
    let k = kappa.eval(s)?;
    let rhs = q * k * (-4.0 * mm.v_gamma(r)? / q).exp() * mm.c_p() * mm.c_p();
    Ok(RicciPoint { s, lhs, rhs })
}

fn ensure_kappa_covers(mm: &ModelManifold, kappa: &KappaProfile, grid: &[f64]) -> Result<()> {
    if let Some(&last) = grid.last() {
        let s = mm.s_p(last)?;
        if s > kappa.horizon() {
            return Err(Error::DeltaExceeded {
                s,
                limit: kappa.horizon(),
            });
        }
    }
    Ok(())
}

fn ricci_points(mm: &ModelManifold, kappa: &KappaProfile, grid: &[f64]) -> Result<Vec<RicciPoint>> {
    ensure_kappa_covers(mm, kappa, grid)?;
    grid.par_iter().map(|&r| ricci_point(mm, kappa, r)).collect()
}

/// `Ric_{m,n}(d_r, d_r) >= (n - m) kappa(s_p) e^{-4 V_gamma/(n-m)} C_p^2` on the grid.
pub fn check_ricci_hypothesis_on(
    mm: &ModelManifold,
    kappa: &KappaProfile,
    grid: &[f64],
    slack: Slack,
) -> Result<ComparisonReport> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let points = ricci_points(mm, kappa, grid)?;
    let mut rep = ComparisonReport::new("ricci_hypothesis", slack);
    for (&r, p) in grid.iter().zip(&points) {
        let margin = p.lhs - p.rhs;
        let t = slack.allow(p.lhs, p.rhs);
        // the hypothesis is the statement under test here
        rep.push(r, p.s, (margin, t), (margin, t));
    }
    rep.judge();
    if let Some((r, v)) = rep.min_hypothesis() {
        rep.diag("min_margin", v);
        rep.diag("min_margin_r", r);
    }
    Ok(rep)
}

pub fn check_ricci_hypothesis(
    mm: &ModelManifold,
    mf: &ModelFunctions,
    r_end: f64,
    grid_size: usize,
) -> Result<ComparisonReport> {
    let grid = default_grid(mm, r_end, grid_size)?;
    check_ricci_hypothesis_on(mm, mf.kappa(), &grid, Slack::DEFAULT)
}

fn ensure_solved_past(mm: &ModelManifold, mf: &ModelFunctions, grid: &[f64]) -> Result<()> {
    if let Some(&last) = grid.last() {
        let s = mm.s_p(last)?;
        if s > mf.s_max() && s < mf.delta() {
            return Err(Error::OutOfRange { s, limit: mf.s_max() });
        }
    }
    Ok(())
}

/// `Delta_V r_p <= (n - m) cot_kappa(s_p) e^{-2 V_gamma/(n-m)} C_p`, gated on the
/// Ricci hypothesis.
pub fn check_laplacian_comparison_on(
    mm: &ModelManifold,
    mf: &ModelFunctions,
    grid: &[f64],
    slack: Slack,
) -> Result<ComparisonReport> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    ensure_solved_past(mm, mf, grid)?;
    let hyp = ricci_points(mm, mf.kappa(), grid)?;
    let q = mm.nm();
    let delta = mf.delta();
    let concl: Vec<(f64, f64)> = grid
        .par_iter()
        .zip(&hyp)
        .map(|(&r, h)| -> Result<(f64, f64)> {
            let lhs = mm.v_laplacian_r(r)?;
            if h.s >= delta {
                return Ok((f64::NEG_INFINITY, slack.allow(lhs, 0.0)));
            }
            let rhs = q * mf.cot_kappa(h.s)? * (-2.0 * mm.v_gamma(r)? / q).exp() * mm.c_p();
            Ok((rhs - lhs, slack.allow(lhs, rhs)))
        })
        .collect::<Result<_>>()?;
    let mut rep = ComparisonReport::new("laplacian_comparison", slack);
    for ((&r, h), c) in grid.iter().zip(&hyp).zip(concl) {
        rep.push(r, h.s, (h.lhs - h.rhs, slack.allow(h.lhs, h.rhs)), c);
    }
    rep.judge();
    let r0 = grid[0];
    rep.diag("pole_r_times_v_laplacian", r0 * mm.v_laplacian_r(r0)?);
    rep.diag("pole_limit", mm.n() as f64 - 1.0);
    rep.diag("pole_bound", q);
    rep.diag("max_margin_over_slack", rep.max_conclusion_ratio());
    if let Some((r, v)) = rep.min_conclusion() {
        rep.diag("min_margin", v);
        rep.diag("min_margin_r", r);
    }
    Ok(rep)
}

pub fn check_laplacian_comparison(
    mm: &ModelManifold,
    mf: &ModelFunctions,
    r_end: f64,
    grid_size: usize,
) -> Result<ComparisonReport> {
    let grid = default_grid(mm, r_end, grid_size)?;
    check_laplacian_comparison_on(mm, mf, &grid, Slack::DEFAULT)
}

// Central difference of lambda in r, Richardson-extrapolated once.
fn lambda_derivative(mm: &ModelManifold, r: f64, h: f64) -> Result<f64> {
    let d = |h: f64| -> Result<f64> { Ok((mm.lambda(r + h)? - mm.lambda(r - h)?) / (2.0 * h)) };
    let coarse = d(h)?;
    let fine = d(0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// `d lambda/ds <= -lambda^2/(n - m) - C_p^{-2} e^{4 V_gamma/(n-m)} Ric_{m,n}(d_r, d_r)`.
///
/// The inequality holds without curvature assumptions, so the hypothesis
/// margin is identically zero. `d lambda/ds` is the Richardson-extrapolated
/// central difference in `r` divided by the exact `ds_p/dr`.
pub fn check_riccati_inequality_on(mm: &ModelManifold, grid: &[f64], slack: Slack) -> Result<ComparisonReport> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let q = mm.nm();
    let r_max = mm.r_max();
    let rows: Vec<(f64, f64, f64)> = grid
        .par_iter()
        .map(|&r| -> Result<(f64, f64, f64)> {
            let h = 1e-2 * r.min(r_max - r);
            let lhs = lambda_derivative(mm, r, h)? / mm.s_p_derivative(r)?;
            let lam = mm.lambda(r)?;
            let ric = mm.modified_ricci_radial(r)?;
            let rhs = -lam * lam / q - (4.0 * mm.v_gamma(r)? / q).exp() * ric / (mm.c_p() * mm.c_p());
            Ok((mm.s_p(r)?, lhs, rhs))
        })
        .collect::<Result<_>>()?;
    let mut rep = ComparisonReport::new("riccati_inequality", slack);
    let mut max_rel = 0.0_f64;
    for (&r, &(s, lhs, rhs)) in grid.iter().zip(&rows) {
        let margin = rhs - lhs;
        let t = slack.allow(lhs, rhs);
        let margin = if margin.is_finite() { margin } else { f64::NAN };
        max_rel = max_rel.max(margin.abs() / lhs.abs().max(rhs.abs()).max(1.0));
        rep.push(r, s, (0.0, 0.0), (margin, t));
    }
    rep.judge();
    let ratio = rep.max_conclusion_ratio();
    rep.diag("max_margin_over_slack", ratio);
    rep.diag("max_relative_margin", max_rel);
    rep.diag("equality", if ratio <= 1.0 { 1.0 } else { 0.0 });
    if let Some((r, v)) = rep.min_conclusion() {
        rep.diag("min_margin", v);
        rep.diag("min_margin_r", r);
    }
    Ok(rep)
}

pub fn check_riccati_inequality(mm: &ModelManifold, r_end: f64, grid_size: usize) -> Result<ComparisonReport> {
    let grid = default_grid(mm, r_end, grid_size)?;
    check_riccati_inequality_on(mm, &grid, Slack::FINITE_DIFFERENCE)
}

fn full_domain_hypothesis(mm: &ModelManifold, mf: &ModelFunctions, slack: Slack) -> Result<ComparisonReport> {
    let grid = default_grid(mm, mm.r_max(), DEFAULT_GRID_SIZE)?;
    check_ricci_hypothesis_on(mm, mf.kappa(), &grid, slack)
}

/// Samples `Delta_V r_p` at `s_p = delta_kappa - eps` for the `BLOWUP_EPSILONS`.
///
/// Blow-up is confirmed when the samples are negative from `eps = 1e-3` on,
/// strictly decreasing, grow by at least a factor 5 per decade of `eps`, and
/// `s_p < delta_kappa` holds on the open domain.
pub fn check_blowup(mm: &ModelManifold, mf: &ModelFunctions, slack: Slack) -> Result<ComparisonReport> {
    let mut rep = ComparisonReport::new("blowup", slack);
    let delta = mf.delta();
    if !delta.is_finite() {
        rep.verdict = Verdict::Inconclusive {
            reason: format!("delta_kappa not finite ({})", mf.first_zero()),
        };
        return Ok(rep);
    }
    let s_end = mm.s_max();
    if delta - BLOWUP_EPSILONS[2] >= s_end {
        rep.verdict = Verdict::Inconclusive {
            reason: format!("s_p reaches only {s_end} before delta_kappa = {delta}"),
        };
        rep.diag("delta", delta);
        rep.diag("sup_s_p", s_end);
        return Ok(rep);
    }
    let hyp = full_domain_hypothesis(mm, mf, slack)?;
    let mut samples = Vec::new();
    for eps in BLOWUP_EPSILONS {
        let s = delta - eps;
        let r = mm.invert_s(s)?;
        let d = mm.v_laplacian_r(r)?;
        let p = ricci_point(mm, mf.kappa(), r)?;
        rep.push(r, s, (p.lhs - p.rhs, slack.allow(p.lhs, p.rhs)), (-eps * d, slack.allow(eps * d, 0.0)));
        rep.diag(&format!("v_laplacian_at_eps_{eps:e}"), d);
        samples.push(d);
    }
    let sup_grid = hyp.s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    rep.diag("delta", delta);
    rep.diag("sup_s_p", s_end);
    rep.diag("sup_s_p_open_grid", sup_grid);
    if let Some(i) = hyp.first_hypothesis_failure() {
        rep.verdict = Verdict::HypothesisFailed { r: hyp.r[i] };
        return Ok(rep);
    }
    rep.judge();
    if !rep.verdict.is_pass() {
        return Ok(rep);
    }
    let decreasing = samples.windows(2).all(|w| w[1] < w[0]);
    let growth = samples[1] < 0.0 && samples[2] < 0.0 && samples[2] / samples[1] >= 5.0;
    if !(decreasing && growth) {
        rep.verdict = Verdict::ConclusionViolated {
            r: rep.r[2],
            margin: samples[2],
        };
    } else if sup_grid >= delta {
        rep.verdict = Verdict::ConclusionViolated {
            r: *hyp.r.last().unwrap(),
            margin: delta - sup_grid,
        };
    }
    Ok(rep)
}

/// `sup s_p <= delta_kappa` under the Ricci hypothesis on the whole domain.
pub fn check_myers(mm: &ModelManifold, mf: &ModelFunctions, slack: Slack) -> Result<ComparisonReport> {
    let delta = mf.delta();
    let mut rep = ComparisonReport::new("myers", slack);
    if !delta.is_finite() {
        rep.verdict = Verdict::Inconclusive {
            reason: format!("delta_kappa not finite ({}); the diameter bound is vacuous", mf.first_zero()),
        };
        rep.diag("sup_s_p", mm.s_max());
        return Ok(rep);
    }
    let hyp = full_domain_hypothesis(mm, mf, slack)?;
    for i in 0..hyp.r.len() {
        let s = hyp.s[i];
        rep.push(
            hyp.r[i],
            s,
            (hyp.hypothesis_margin[i], hyp.hypothesis_slack[i]),
            (delta - s, slack.allow(delta, s)),
        );
    }
    let sup = mm.s_max();
    rep.push(mm.r_max(), sup, (f64::INFINITY, 0.0), (delta - sup, slack.allow(delta, sup)));
    rep.judge();
    rep.diag("sup_s_p", sup);
    rep.diag("delta", delta);
    rep.diag("diameter_margin", delta - sup);
    Ok(rep)
}

/// `Delta_V r_p <= (n - m) / (e^{2 V_gamma/(n-m)} int_0^r e^{-2 V_gamma/(n-m)})`
/// under `Ric_{m,n} >= 0`, with the integral computed by its own quadrature.
///
/// Also records the largest relative deviation from the same bound written as
/// the `kappa = 0` Laplacian comparison through the `s_p` table.
pub fn check_kappa0_bound_on(mm: &ModelManifold, grid: &[f64], slack: Slack) -> Result<ComparisonReport> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let q = mm.nm();
    let mut knots = Vec::with_capacity(grid.len() + 1);
    knots.push(0.0);
    knots.extend_from_slice(grid);
    let pieces: Vec<f64> = knots
        .par_windows(2)
        .map(|w| mm.integrate_with_v(w[0], w[1], |_, v| (-2.0 * v / q).exp()))
        .collect::<Result<_>>()?;
    let mut rep = ComparisonReport::new("kappa0_bound", slack);
    let mut integral = 0.0;
    let mut identity_dev = 0.0_f64;
    for (&r, piece) in grid.iter().zip(pieces) {
        integral += piece;
        let v = mm.v_gamma(r)?;
        let ric = mm.modified_ricci_radial(r)?;
        let lhs = mm.v_laplacian_r(r)?;
        let rhs = q / ((2.0 * v / q).exp() * integral);
        let s = mm.s_p(r)?;
        let via_s = q * (1.0 / s) * (-2.0 * v / q).exp() * mm.c_p();
        identity_dev = identity_dev.max(((rhs - via_s) / rhs).abs());
        rep.push(r, s, (ric, slack.allow(ric, 0.0)), (rhs - lhs, slack.allow(lhs, rhs)));
    }
    rep.judge();
    rep.diag("identity_max_rel_deviation", identity_dev);
    if rep.verdict.is_pass() && identity_dev > 1e-10 {
        rep.verdict = Verdict::Inconclusive {
            reason: format!("kappa = 0 identity deviates by {identity_dev:e}"),
        };
    }
    if let Some((r, v)) = rep.min_conclusion() {
        rep.diag("min_margin", v);
        rep.diag("min_margin_r", r);
    }
    Ok(rep)
}

pub fn check_kappa0_bound(mm: &ModelManifold, r_end: f64, grid_size: usize) -> Result<ComparisonReport> {
    let grid = default_grid(mm, r_end, grid_size)?;
    check_kappa0_bound_on(mm, &grid, Slack::DEFAULT)
}

/// `inf_grid Ric_{m,n} e^{4 V_gamma/(n-m)} / ((n - m) C_p^2)`.
pub fn find_best_constant_kappa_on(mm: &ModelManifold, grid: &[f64]) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let q = mm.nm();
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&r| -> Result<f64> {
            Ok(mm.modified_ricci_radial(r)? * (4.0 * mm.v_gamma(r)? / q).exp() / (q * mm.c_p() * mm.c_p()))
        })
        .collect::<Result<_>>()?;
    Ok(values.into_iter().fold(f64::INFINITY, f64::min))
}

pub fn find_best_constant_kappa(mm: &ModelManifold, r_end: f64, grid_size: usize) -> Result<f64> {
    let grid = default_grid(mm, r_end, grid_size)?;
    find_best_constant_kappa_on(mm, &grid)
}
