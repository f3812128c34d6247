//! The maximal-diameter equality model: `m = 1`, potential `phi` with
//! `phi'(0) = 0`, and the warped product
//! `f(r) = e^{(phi(r) + phi(0))/(n-1)} sk(s(r))` with
//! `s(r) = c_p int_0^r e^{-2(phi - phi(0))/(n-1)}`, `c_p = e^{-2 phi(0)/(n-1)}`.
//!
//! With these choices `Ric_{1,n}(d_r, d_r) = (n - 1) kappa(s) s'^2` holds
//! identically, so every comparison inequality is an equality.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::comparison::{default_grid, ComparisonReport, Slack};
use crate::error::{Error, Result};
use crate::model_functions::{check_symmetry, solve_jacobi, KappaProfile, ModelFunctions};
use crate::model_manifold::{Drift, ModelManifold, RadialProfile};
use crate::numerics::quadrature::gk15;
use crate::numerics::{integrate, roots, Tolerance};
use crate::radial::{Perturbed, RadialFn, SharedFn};

const TABLE_CELLS: usize = 4096;
const R_LIMIT: f64 = 1e4;
const EQUALITY_TOL: f64 = 1e-6;
const POLE_TOL: f64 = 1e-8;

/// `f(r) = e^{(phi(r) + phi(0))/(n-1)} sk(s(r))` with its own table for `s(r)`.
#[derive(Debug)]
pub struct ChengWarp {
    mf: Arc<ModelFunctions>,
    phi: SharedFn,
    dim: f64,
    c_p: f64,
    phi0: f64,
    nodes: Vec<f64>,
    s_cum: Vec<f64>,
}

impl ChengWarp {
    fn density(&self, t: f64) -> f64 {
        (-2.0 * (self.phi.value(t) - self.phi0) / self.dim).exp()
    }

    /// `s(r)`.
    pub fn s(&self, r: f64) -> f64 {
        let h = self.nodes[1];
        let i = ((r / h) as usize).min(self.nodes.len() - 2);
        let a = self.nodes[i];
        let partial = if r == a { 0.0 } else { gk15(&mut |t| self.density(t), a, r).0 };
        self.c_p * (self.s_cum[i] + partial)
    }
}

impl RadialFn for ChengWarp {
    fn eval(&self, r: f64) -> [f64; 3] {
        let d = self.dim;
        let [phi, p1, p2] = self.phi.eval(r);
        let e = ((phi + self.phi0) / d).exp();
        let e1 = e * p1 / d;
        let e2 = e * (p2 / d + p1 * p1 / (d * d));
        let s = self.s(r).min(self.mf.s_max());
        let s1 = self.c_p * (-2.0 * (phi - self.phi0) / d).exp();
        let s2 = -2.0 * p1 / d * s1;
        let (sk, skp) = self.mf.eval(s).unwrap_or((f64::NAN, f64::NAN));
        let k = self.mf.kappa().eval(s).unwrap_or(f64::NAN);
        let big_s = sk;
        let big_s1 = skp * s1;
        let big_s2 = -k * sk * s1 * s1 + skp * s2;
        [
            e * big_s,
            e1 * big_s + e * big_s1,
            e2 * big_s + 2.0 * e1 * big_s1 + e * big_s2,
        ]
    }
}

#[derive(Debug, Clone)]
pub struct MaximalModel {
    pub base: ModelManifold,
    pub phi: SharedFn,
    pub mf: Arc<ModelFunctions>,
    pub r_end: f64,
    warp: Arc<ChengWarp>,
}

impl MaximalModel {
    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn delta(&self) -> f64 {
        self.mf.delta()
    }

    /// `s(r) = int_0^r e^{-2 phi/(n-1)}`.
    pub fn s_of_r(&self, r: f64) -> f64 {
        self.warp.s(r)
    }

    /// `F_kappa(r) = exp(V_gamma(r)/(n-1)) sk(s_p(r))`.
    pub fn f_kappa(&self, r: f64) -> Result<f64> {
        let v = self.base.v_gamma(r)?;
        let s = self.base.s_p(r)?;
        Ok((v / (self.n() as f64 - 1.0)).exp() * self.mf.sk(s.min(self.mf.s_max()))?)
    }

    /// The same model with `f` replaced by `f (1 + eps r^2)`.
    pub fn with_perturbed_warp(&self, eps: f64) -> Result<MaximalModel> {
        let warp: SharedFn = Arc::new(Perturbed {
            inner: self.warp.clone(),
            eps,
        });
        let profile = RadialProfile::new(warp, Drift::Potential(self.phi.clone()), self.r_end, true)?;
        let base = ModelManifold::new(self.n(), 1.0, profile, Some(self.base.c_p()))?;
        Ok(MaximalModel { base, ..self.clone() })
    }

    /// `(r, f, v, s)` rows on `points` uniform radii of `[0, r_end]`.
    pub fn table(&self, points: usize) -> Result<Vec<[f64; 4]>> {
        let points = points.max(2);
        (0..points)
            .map(|i| {
                let r = self.r_end * i as f64 / (points - 1) as f64;
                Ok([r, self.base.profile().f(r)[0], self.base.profile().drift(r).0, self.base.s_p(r)?])
            })
            .collect()
    }
}

fn solve_with_zero(kappa: &KappaProfile, tol: f64) -> Result<ModelFunctions> {
    let s_max = if kappa.horizon().is_finite() {
        kappa.horizon()
    } else {
        match kappa.constant_value() {
            Some(k) if k > 0.0 => 1.05 * PI / k.sqrt(),
            _ => {
                return Err(Error::InvalidProfile(
                    "the maximal model needs a finite delta_kappa".into(),
                ))
            }
        }
    };
    let mf = solve_jacobi(kappa.clone(), s_max, tol)?;
    if !mf.delta().is_finite() {
        return Err(Error::InvalidProfile(format!(
            "no zero of sk within the kappa horizon: {}",
            mf.first_zero()
        )));
    }
    Ok(mf)
}

/// Builds the equality model for `(n, kappa, phi)` with the canonical `c_p`.
pub fn build_cheng_model(n: usize, kappa: &KappaProfile, phi: SharedFn) -> Result<MaximalModel> {
    build_cheng_model_with(n, kappa, phi, None)
}

/// As [`build_cheng_model`], optionally overriding `c_p`. A wrong `c_p` breaks
/// `f'(0) = 1`; the profile is then built without the pole validation so the
/// defect can be diagnosed by [`verify_pole_smoothness`].
pub fn build_cheng_model_with(
    n: usize,
    kappa: &KappaProfile,
    phi: SharedFn,
    c_p_override: Option<f64>,
) -> Result<MaximalModel> {
    if n < 2 {
        return Err(Error::InvalidDimension { n, m: 1.0 });
    }
    let [phi0, dphi0, _] = phi.eval(0.0);
    if dphi0.abs() > 1e-10 {
        return Err(Error::InvalidProfile(format!("potential must satisfy phi'(0) = 0, got {dphi0}")));
    }
    let mf = Arc::new(solve_with_zero(kappa, 1e-12)?);
    let delta = mf.delta();
    check_symmetry(kappa, delta)?;

    let dim = n as f64 - 1.0;
    let canonical = (-2.0 * phi0 / dim).exp();
    let c_p = c_p_override.unwrap_or(canonical);
    let density = |t: f64| (-2.0 * (phi.value(t) - phi0) / dim).exp();
    let tol = Tolerance::default();
    let s_at = |r: f64| -> Result<f64> { Ok(c_p * integrate(density, 0.0, r, tol)?) };

    let mut hi = 1.0;
    while s_at(hi)? < delta {
        hi *= 2.0;
        if hi > R_LIMIT {
            return Err(Error::HorizonTooShort { delta, r_limit: R_LIMIT });
        }
    }
    let coarse = roots::bisect(|r| Ok(s_at(r)? - delta), 0.0, hi)?;

    let h = coarse / TABLE_CELLS as f64;
    let nodes: Vec<f64> = (0..=TABLE_CELLS).map(|i| h * i as f64).collect();
    let mut s_cum = vec![0.0; nodes.len()];
    for i in 0..TABLE_CELLS {
        s_cum[i + 1] = s_cum[i] + integrate(density, nodes[i], nodes[i + 1], tol)?;
    }
    let warp = Arc::new(ChengWarp {
        mf: mf.clone(),
        phi: phi.clone(),
        dim,
        c_p,
        phi0,
        nodes,
        s_cum,
    });
    // refine r_end against the table that the warp actually uses
    let r_end = roots::bisect(|r| Ok(warp.s(r) - delta), 0.5 * coarse, coarse).unwrap_or(coarse);

    let shared: SharedFn = warp.clone();
    let profile = if c_p_override.is_some() {
        RadialProfile::new_unchecked(shared, Drift::Potential(phi.clone()), r_end, true)?
    } else {
        RadialProfile::new(shared, Drift::Potential(phi.clone()), r_end, true)?
    };
    let base = ModelManifold::new(n, 1.0, profile, Some(c_p))?;
    Ok(MaximalModel {
        base,
        phi,
        mf,
        r_end,
        warp,
    })
}

/// Checks on the default grid, to `1e-6` relative:
/// (a) equality in the Laplacian comparison, (b) the Einstein-type identity
/// `Ric_{1,n} = (n - 1) kappa(s_p) e^{-4 V_gamma/(n-1)} C_p^2`, and
/// (c) `f = C_p^{-1} F_kappa`.
pub fn verify_equality_case(model: &MaximalModel, grid_size: usize) -> Result<ComparisonReport> {
    let mm = &model.base;
    let grid = default_grid(mm, mm.r_max(), grid_size)?;
    let q = mm.n() as f64 - 1.0;
    let c_p = mm.c_p();
    let slack = Slack {
        abs: EQUALITY_TOL,
        rel: EQUALITY_TOL,
    };
    let mut rep = ComparisonReport::new("equality_case", slack);
    let mut worst: [(f64, f64); 3] = [(0.0, 0.0); 3];
    let names = ["laplacian", "einstein", "metric"];
    for &r in &grid {
        let s = mm.s_p(r)?;
        let v = mm.v_gamma(r)?;
        let lap = mm.v_laplacian_r(r)?;
        let lap_model = q * model.mf.cot_kappa(s)? * (-2.0 * v / q).exp() * c_p;
        let ric = mm.modified_ricci_radial(r)?;
        let ric_model = q * model.mf.kappa().eval(s)? * (-4.0 * v / q).exp() * c_p * c_p;
        let f = mm.profile().f(r)[0];
        let f_model = model.f_kappa(r)? / c_p;
        let pairs = [(lap, lap_model), (ric, ric_model), (f, f_model)];
        for (k, (a, b)) in pairs.iter().enumerate() {
            let dev = (a - b).abs() / (1.0 + a.abs().max(b.abs()));
            if !(dev <= worst[k].0) {
                worst[k] = (dev, r);
            }
        }
        rep.push(
            r,
            s,
            (ric - ric_model, slack.allow(ric, ric_model)),
            (lap_model - lap, slack.allow(lap, lap_model)),
        );
    }
    for (k, name) in names.iter().enumerate() {
        rep.diag(&format!("max_rel_deviation_{name}"), worst[k].0);
    }
    for (k, name) in names.iter().enumerate() {
        if !(worst[k].0 <= EQUALITY_TOL) {
            return Err(Error::EqualityViolated {
                which: name.to_string(),
                r: worst[k].1,
                deviation: worst[k].0,
            });
        }
    }
    rep.judge();
    Ok(rep)
}

/// `f(0) = 0` and `f'(0) = 1` to `1e-8`, with `f'(0)` from a one-sided second
/// order difference and from the product rule `e^{2 phi(0)/(n-1)} c_p`.
pub fn verify_pole_smoothness(model: &MaximalModel) -> Result<BTreeMap<String, f64>> {
    let f = |r: f64| model.base.profile().f(r)[0];
    let h = 1e-5;
    let f0 = f(0.0);
    let one_sided = (-3.0 * f0 + 4.0 * f(h) - f(2.0 * h)) / (2.0 * h);
    let phi0 = model.phi.value(0.0);
    let analytic = (2.0 * phi0 / (model.n() as f64 - 1.0)).exp() * model.base.c_p();
    let mut out = BTreeMap::new();
    out.insert("f_at_0".to_string(), f0);
    out.insert("f_prime_at_0_difference".to_string(), one_sided);
    out.insert("f_prime_at_0_analytic".to_string(), analytic);
    if f0.abs() > POLE_TOL {
        return Err(Error::PoleDefect(format!("f(0) = {f0}")));
    }
    for (label, value) in [("difference", one_sided), ("analytic", analytic)] {
        if (value - 1.0).abs() > POLE_TOL {
            return Err(Error::PoleDefect(format!("f'(0) = {value} by {label}")));
        }
    }
    Ok(out)
}

/// `kappa(s) = 1 + c s (delta - s)`, with `delta` chosen self-consistently as
/// the first zero of its own `sk`. The profile is symmetric about `delta`.
pub fn symmetric_bump_kappa(c: f64) -> Result<KappaProfile> {
    let build = |d: f64| KappaProfile::polynomial(vec![1.0, c * d, -c], 1.1 * d.max(PI));
    let mismatch_at = |d: f64, tol: f64| -> Result<f64> {
        let k = build(d)?;
        let h = k.horizon();
        Ok(solve_jacobi(k, h, tol)?.delta() - d)
    };
    let mismatch = |d: f64| mismatch_at(d, 1e-12);
    // For c < 0 a second, spurious fixed point appears further out, so bracket
    // the first sign change instead of bisecting one wide interval.
    let mut lo = 1.0;
    // the scan only needs signs, so a coarse solve is enough
    let mut f_lo = mismatch_at(lo, 1e-8)?;
    loop {
        let hi = lo + 0.25;
        if hi > 4.0 * PI {
            return Err(Error::InvalidProfile(format!("no self-consistent delta for bump c = {c}")));
        }
        let f_hi = mismatch_at(hi, 1e-8)?;
        if f_lo.signum() != f_hi.signum() {
            let delta = roots::bisect(mismatch, lo, hi)?;
            return build(delta)?.with_symmetry(delta);
        }
        lo = hi;
        f_lo = f_hi;
    }
}
