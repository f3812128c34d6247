use rayon::prelude::*;

use super::pointwise::check_ricci_hypothesis_on;
use super::report::{ComparisonReport, Slack, Table, Verdict};
use super::{default_grid, DEFAULT_GRID_SIZE};
use crate::error::{Error, Result};
use crate::model_functions::ModelFunctions;
use crate::model_manifold::{model_volume, model_volume_r, ModelManifold, Weight};

fn ensure_below_delta(mm: &ModelManifold, mf: &ModelFunctions, grid: &[f64]) -> Result<()> {
    if let Some(&last) = grid.last() {
        let s = mm.s_p(last)?;
        let limit = mf.delta().min(mf.s_max());
        if s > limit {
            return Err(Error::DeltaExceeded { s, limit });
        }
    }
    Ok(())
}

/// `J_V(r1)/J_V(r0) <= sk(s_p(r1))^{n-m} / sk(s_p(r0))^{n-m}` for all grid
/// pairs `r0 < r1`, written as monotonicity of
/// `Q = log J_V - (n - m) log sk(s_p)`.
pub fn check_volume_element_on(
    mm: &ModelManifold,
    mf: &ModelFunctions,
    grid: &[f64],
    slack: Slack,
) -> Result<ComparisonReport> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    ensure_below_delta(mm, mf, grid)?;
    let hyp = check_ricci_hypothesis_on(mm, mf.kappa(), grid, slack)?;
    let q = mm.nm();
    let terms: Vec<(f64, f64)> = grid
        .par_iter()
        .zip(&hyp.s)
        .map(|(&r, &s)| -> Result<(f64, f64)> {
            let f = mm.profile().f(r)[0];
            let log_jv = (mm.n() as f64 - 1.0) * f.ln() - mm.v_gamma(r)?;
            let log_model = q * mf.sk(s)?.ln();
            Ok((log_jv, log_model))
        })
        .collect::<Result<_>>()?;
    let mut rep = ComparisonReport::new("volume_element", slack);
    let mut running = f64::INFINITY;
    let mut running_scale = 0.0_f64;
    let q0 = terms[0].0 - terms[0].1;
    let mut max_dev = 0.0_f64;
    for i in 0..grid.len() {
        let (a, b) = terms[i];
        let value = a - b;
        let margin = if i == 0 { 0.0 } else { running - value };
        let t = slack.abs + slack.rel * a.abs().max(b.abs()).max(running_scale);
        let margin = if margin.is_nan() { f64::NAN } else { margin };
        rep.push(
            grid[i],
            hyp.s[i],
            (hyp.hypothesis_margin[i], hyp.hypothesis_slack[i]),
            (margin, t),
        );
        if value < running {
            running = value;
            running_scale = a.abs().max(b.abs());
        }
        max_dev = max_dev.max((value - q0).abs());
    }
    rep.judge();
    rep.diag("max_abs_log_ratio_deviation", max_dev);
    if let Some((r, v)) = rep.min_conclusion() {
        rep.diag("min_margin", v);
        rep.diag("min_margin_r", r);
    }
    Ok(rep)
}

pub fn check_volume_element(
    mm: &ModelManifold,
    mf: &ModelFunctions,
    r_end: f64,
    grid_size: usize,
) -> Result<ComparisonReport> {
    let grid = default_grid(mm, r_end, grid_size)?;
    check_volume_element_on(mm, mf, &grid, Slack::DEFAULT)
}

// Index quadruples (i0, ia, ib, i1) with i0 <= ib < i1 and i0 < ia <= i1.
fn annuli_quadruples(len: usize) -> Vec<(usize, usize, usize, usize)> {
    if len < 2 {
        return Vec::new();
    }
    let mut picks: Vec<usize> = [0, len / 8, len / 4, len / 2, 3 * len / 4, len - 1].to_vec();
    picks.dedup();
    let mut out = Vec::new();
    for &i0 in &picks {
        for &i1 in &picks {
            for &ia in &picks {
                for &ib in &picks {
                    if i0 <= ib && ib < i1 && i0 < ia && ia <= i1 {
                        out.push((i0, ia, ib, i1));
                    }
                }
            }
        }
    }
    out
}

// Shared logic for the two Bishop-Gromov statements: `num` and `den` are
// cumulative measures from the pole at each grid point.
fn bishop_gromov(
    name: &str,
    grid: &[f64],
    hyp: &ComparisonReport,
    num: &[f64],
    den: &[f64],
    slack: Slack,
) -> ComparisonReport {
    let mut rep = ComparisonReport::new(name, slack);
    let ratios: Vec<f64> = num.iter().zip(den).map(|(a, b)| a / b).collect();
    for i in 0..grid.len() {
        let margin = if i == 0 { 0.0 } else { ratios[i - 1] - ratios[i] };
        let prev = if i == 0 { ratios[0] } else { ratios[i - 1] };
        rep.push(
            grid[i],
            hyp.s[i],
            (hyp.hypothesis_margin[i], hyp.hypothesis_slack[i]),
            (margin, slack.allow(prev, ratios[i])),
        );
    }
    rep.judge();
    let quads = annuli_quadruples(grid.len());
    let mut worst = (f64::INFINITY, 0usize);
    for &(i0, ia, ib, i1) in &quads {
        let lhs = ((num[i1] - num[ib]) / (num[ia] - if i0 == 0 { 0.0 } else { num[i0] })).ln();
        let rhs = ((den[i1] - den[ib]) / (den[ia] - if i0 == 0 { 0.0 } else { den[i0] })).ln();
        let margin = rhs - lhs + slack.rel.max(1e-9) * 1.0_f64.max(lhs.abs()).max(rhs.abs());
        if margin < worst.0 {
            worst = (margin, i1);
        }
    }
    rep.diag("annuli_quadruples", quads.len() as f64);
    if !quads.is_empty() {
        rep.diag("annuli_min_log_margin", worst.0);
    }
    if rep.verdict.is_pass() && worst.0 < 0.0 {
        rep.verdict = Verdict::ConclusionViolated {
            r: grid[worst.1],
            margin: worst.0,
        };
    }
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    rep.diag("ratio_min", lo);
    rep.diag("ratio_max", hi);
    rep.diag("ratio_first", ratios[0]);
    rep.diag("ratio_last", *ratios.last().unwrap());
    rep.table = Some(Table {
        columns: vec!["r".into(), "s".into(), "numerator".into(), "denominator".into(), "ratio".into()],
        rows: (0..grid.len())
            .map(|i| vec![grid[i], hyp.s[i], num[i], den[i], ratios[i]])
            .collect(),
    });
    rep
}

// Cumulative sums of pieces over [0, g0], [g0, g1], ...
fn cumulative<F>(grid: &[f64], piece: F) -> Result<Vec<f64>>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    let mut knots = Vec::with_capacity(grid.len() + 1);
    knots.push(0.0);
    knots.extend_from_slice(grid);
    let pieces: Vec<f64> = knots.par_windows(2).map(|w| piece(w[0], w[1])).collect::<Result<_>>()?;
    let mut acc = 0.0;
    Ok(pieces
        .into_iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect())
}

/// `s -> nu_V(C_s) / v(kappa, s)` non-increasing along `s = s_p(r)` for `r` in `grid`.
pub fn check_bg_s(mm: &ModelManifold, mf: &ModelFunctions, grid: &[f64], slack: Slack) -> Result<ComparisonReport> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    ensure_below_delta(mm, mf, grid)?;
    let hyp = check_ricci_hypothesis_on(mm, mf.kappa(), grid, Slack::DEFAULT)?;
    let num: Vec<f64> = grid
        .par_iter()
        .map(|&r| mm.measure_ball(r, Weight::Nu))
        .collect::<Result<_>>()?;
    let den = cumulative(&hyp.s, |a, b| model_volume(mf, mm.n(), mm.m(), a, b))?;
    Ok(bishop_gromov("bg_s", grid, &hyp, &num, &den, slack))
}

/// `r -> mu_V(B_r) / nu_p(kappa, r)` non-increasing on `grid`.
pub fn check_bg_r(mm: &ModelManifold, mf: &ModelFunctions, grid: &[f64], slack: Slack) -> Result<ComparisonReport> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    ensure_below_delta(mm, mf, grid)?;
    let hyp = check_ricci_hypothesis_on(mm, mf.kappa(), grid, Slack::DEFAULT)?;
    let num: Vec<f64> = grid
        .par_iter()
        .map(|&r| mm.measure_ball(r, Weight::Mu))
        .collect::<Result<_>>()?;
    let den = cumulative(grid, |a, b| model_volume_r(mm, mf, a, b))?;
    Ok(bishop_gromov("bg_r", grid, &hyp, &num, &den, slack))
}

/// `mu_V(B_{r2}) / mu_V(B_{r1}) <= e^{2(phi_upper(r1) - phi_lower(r2))} (r2/r1)^{n-m+1}`
/// for each pair, under `Ric_{m,n} >= 0` on `(0, max r2]`. Compared in log form.
pub fn check_ball_growth(mm: &ModelManifold, pairs: &[(f64, f64)], slack: Slack) -> Result<ComparisonReport> {
    if pairs.is_empty() {
        return Err(Error::EmptyGrid);
    }
    for &(r1, r2) in pairs {
        if !(r1 > 0.0) || r1 > r2 || r2 > mm.r_max() {
            return Err(Error::out_of_domain(
                r1,
                format!("pairs need 0 < r1 <= r2 <= {} (got ({r1}, {r2}))", mm.r_max()),
            ));
        }
    }
    let r_top = pairs.iter().map(|p| p.1).fold(0.0, f64::max);
    let hyp_grid = default_grid(mm, r_top, DEFAULT_GRID_SIZE)?;
    let ric: Vec<f64> = hyp_grid
        .par_iter()
        .map(|&r| mm.modified_ricci_radial(r))
        .collect::<Result<_>>()?;
    let q = mm.nm();
    let mut rep = ComparisonReport::new("ball_growth", slack);
    let mut rows = Vec::new();
    for &(r1, r2) in pairs {
        let (hyp_min, hyp_slack) = hyp_grid
            .iter()
            .zip(&ric)
            .filter(|(r, _)| **r <= r2)
            .map(|(_, &v)| (v, slack.allow(v, 0.0)))
            .fold((f64::INFINITY, slack.abs), |acc, x| if x.0 < acc.0 { x } else { acc });
        let lhs = if r1 == r2 {
            0.0
        } else {
            (mm.measure_ball(r2, Weight::Mu)? / mm.measure_ball(r1, Weight::Mu)?).ln()
        };
        let rhs = 2.0 * (mm.phi_upper(r1)? - mm.phi_lower(r2)?) + (q + 1.0) * (r2 / r1).ln();
        rep.push(r1, mm.s_p(r1)?, (hyp_min, hyp_slack), (rhs - lhs, slack.allow(lhs, rhs)));
        rows.push(vec![r1, r2, lhs.exp(), rhs.exp(), rhs - lhs]);
    }
    rep.judge();
    rep.table = Some(Table {
        columns: vec!["r1".into(), "r2".into(), "ratio".into(), "bound".into(), "log_margin".into()],
        rows,
    });
    Ok(rep)
}
