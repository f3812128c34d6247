//! Rotationally symmetric weighted models `g = dr^2 + f(r)^2 g_S` with a radial
//! drift `V = v(r) d/dr`, and every quantity along the radial geodesics.
//!
//! Along a radial ray `V_gamma(r) = int_0^r v`, and in this model class the
//! radial ray realizes the infimum defining `phi_V`, so `phi_V = V_gamma`.
//! Cumulative integrals are tabulated once per manifold on a fixed node set;
//! evaluation between nodes adds a single Gauss-Kronrod panel.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model_functions::{check_dimensions, ModelFunctions};
use crate::numerics::quadrature::gk15;
use crate::numerics::{integrate, roots, sphere_area, Tolerance};
use crate::radial::{RadialFn, SharedFn};

/// Below this radius `f'/f` and `f''/f` come from the pole expansion.
pub const POLE_THRESHOLD: f64 = 1e-6;

pub const DEFAULT_TABLE_CELLS: usize = 4096;

// Geometric refinement levels inside the first uniform cell.
const POLE_LEVELS: i32 = 20;

#[derive(Debug, Clone)]
pub enum Drift {
    None,
    /// `v` given directly.
    Field(SharedFn),
    /// `v = phi'` for a potential `phi`.
    Potential(SharedFn),
}

#[derive(Debug, Clone)]
pub struct RadialProfile {
    warp: SharedFn,
    drift: Drift,
    r_max: f64,
    closed: bool,
}

impl RadialProfile {
    /// Validates `f(0) = 0`, `f'(0) = 1`, `f > 0` and finiteness on a sample of
    /// `(0, r_max)`, and `phi'(0) = 0` for potentials.
    ///
    /// `closed` marks a second pole at `r_max` (where `f` vanishes again).
    pub fn new(warp: SharedFn, drift: Drift, r_max: f64, closed: bool) -> Result<Self> {
        let profile = Self::new_unchecked(warp, drift, r_max, closed)?;
        let [f0, f1, _] = profile.warp.eval(0.0);
        if f0.abs() > 1e-10 || (f1 - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidProfile(format!(
                "warping function must satisfy f(0) = 0 and f'(0) = 1, got {f0} and {f1}"
            )));
        }
        if let Drift::Potential(phi) = &profile.drift {
            let d = phi.eval(0.0)[1];
            if d.abs() > 1e-10 {
                return Err(Error::InvalidProfile(format!("potential must satisfy phi'(0) = 0, got {d}")));
            }
        }
        for k in 1..256 {
            let r = r_max * k as f64 / 256.0;
            let [f, f1, f2] = profile.warp.eval(r);
            let (v, dv) = profile.drift(r);
            if !(f > 0.0) || ![f1, f2, v, dv].iter().all(|x| x.is_finite()) {
                return Err(Error::InvalidProfile(format!(
                    "profile not positive and finite at r = {r}: f = {f}, f' = {f1}, f'' = {f2}, v = {v}, v' = {dv}"
                )));
            }
        }
        Ok(profile)
    }

    /// Skips the pole and positivity checks. Used to build deliberately
    /// defective models.
    pub fn new_unchecked(warp: SharedFn, drift: Drift, r_max: f64, closed: bool) -> Result<Self> {
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(Error::InvalidProfile(format!("r_max must be finite and positive, got {r_max}")));
        }
        Ok(RadialProfile {
            warp,
            drift,
            r_max,
            closed,
        })
    }

    pub fn warp(&self) -> &SharedFn {
        &self.warp
    }

    pub fn drift_kind(&self) -> &Drift {
        &self.drift
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    /// `(f, f', f'')` at `r`.
    pub fn f(&self, r: f64) -> [f64; 3] {
        self.warp.eval(r)
    }

    /// `(v, v')` at `r`.
    pub fn drift(&self, r: f64) -> (f64, f64) {
        match &self.drift {
            Drift::None => (0.0, 0.0),
            Drift::Field(v) => {
                let [a, b, _] = v.eval(r);
                (a, b)
            }
            Drift::Potential(phi) => {
                let [_, a, b] = phi.eval(r);
                (a, b)
            }
        }
    }

    pub fn potential_at_zero(&self) -> Option<f64> {
        match &self.drift {
            Drift::Potential(phi) => Some(phi.value(0.0)),
            _ => None,
        }
    }

    pub fn has_drift(&self) -> bool {
        !matches!(self.drift, Drift::None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    /// `e^{-phi_V} dvol`
    Mu,
    /// `e^{-(n-m+2) phi_V/(n-m)} dvol`
    Nu,
}

/// Cumulative tables along the radial geodesic.
#[derive(Debug, Clone)]
pub struct GeodesicQuantities {
    nodes: Vec<f64>,
    v_gamma: Vec<f64>,
    // running extrema of V_gamma over [0, node]
    v_upper: Vec<f64>,
    v_lower: Vec<f64>,
    // int_0^node e^{-2V/(n-m)}, without C_p
    s_cum: Vec<f64>,
    mu_cell: Vec<f64>,
    nu_cell: Vec<f64>,
    mu_cum: Vec<f64>,
    nu_cum: Vec<f64>,
}

impl GeodesicQuantities {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn v_gamma_nodes(&self) -> &[f64] {
        &self.v_gamma
    }
}

#[derive(Debug, Clone)]
pub struct ModelManifold {
    n: usize,
    m: f64,
    profile: RadialProfile,
    c_p: f64,
    pole_b: f64,
    pole_c: f64,
    tables: GeodesicQuantities,
}

impl ModelManifold {
    /// `c_p = None` selects the default: 1, or `exp(-2 phi(0)/(n-m))` for a potential.
    pub fn new(n: usize, m: f64, profile: RadialProfile, c_p: Option<f64>) -> Result<Self> {
        Self::with_table_size(n, m, profile, c_p, DEFAULT_TABLE_CELLS)
    }

    pub fn with_table_size(
        n: usize,
        m: f64,
        profile: RadialProfile,
        c_p: Option<f64>,
        cells: usize,
    ) -> Result<Self> {
        check_dimensions(n, m)?;
        if n < 2 {
            return Err(Error::InvalidDimension { n, m });
        }
        let c_p = match c_p {
            Some(c) => c,
            None => match profile.potential_at_zero() {
                Some(phi0) => (-2.0 * phi0 / (n as f64 - m)).exp(),
                None => 1.0,
            },
        };
        if !(c_p > 0.0) || !c_p.is_finite() {
            return Err(Error::out_of_domain(c_p, "C_p > 0"));
        }
        if cells < 1 {
            return Err(Error::EmptyGrid);
        }
        let [_, _, f2] = profile.warp.eval(0.0);
        let pole_b = 0.5 * f2;
        let pole_c = profile.warp.third_at_zero() / 6.0;
        let mut mm = ModelManifold {
            n,
            m,
            profile,
            c_p,
            pole_b,
            pole_c,
            tables: GeodesicQuantities {
                nodes: Vec::new(),
                v_gamma: Vec::new(),
                v_upper: Vec::new(),
                v_lower: Vec::new(),
                s_cum: Vec::new(),
                mu_cell: Vec::new(),
                nu_cell: Vec::new(),
                mu_cum: Vec::new(),
                nu_cum: Vec::new(),
            },
        };
        mm.build_tables(cells)?;
        Ok(mm)
    }

    fn build_tables(&mut self, cells: usize) -> Result<()> {
        let r_max = self.profile.r_max;
        let h = r_max / cells as f64;
        let mut nodes = vec![0.0];
        for k in (1..=POLE_LEVELS).rev() {
            nodes.push(h * 2f64.powi(-k));
        }
        for i in 1..cells {
            nodes.push(h * i as f64);
        }
        nodes.push(r_max);

        let tol = Tolerance::default();
        let q = self.nm();
        let count = nodes.len();
        self.tables.nodes = nodes;
        let t = &mut self.tables;
        t.v_gamma = vec![0.0; count];
        t.v_upper = vec![0.0; count];
        t.v_lower = vec![0.0; count];
        t.s_cum = vec![0.0; count];
        t.mu_cum = vec![0.0; count];
        t.nu_cum = vec![0.0; count];
        t.mu_cell = vec![0.0; count - 1];
        t.nu_cell = vec![0.0; count - 1];

        for i in 0..count - 1 {
            let (a, b) = (self.tables.nodes[i], self.tables.nodes[i + 1]);
            let v_b = match &self.profile.drift {
                Drift::None => 0.0,
                Drift::Potential(phi) => phi.value(b) - phi.value(0.0),
                Drift::Field(v) => self.tables.v_gamma[i] + integrate(|x| v.value(x), a, b, tol)?,
            };
            let (lo, hi) = self.cell_extrema(i, b, v_b);
            let s_cell = integrate(|x| (-2.0 * self.v_local(i, x) / q).exp(), a, b, tol)?;
            let mu = integrate(|x| self.weight_density(Weight::Mu, x, self.v_local(i, x)), a, b, tol)?;
            let nu = integrate(|x| self.weight_density(Weight::Nu, x, self.v_local(i, x)), a, b, tol)?;
            let t = &mut self.tables;
            t.v_gamma[i + 1] = v_b;
            t.v_upper[i + 1] = t.v_upper[i].max(hi);
            t.v_lower[i + 1] = t.v_lower[i].min(lo);
            t.s_cum[i + 1] = t.s_cum[i] + s_cell;
            t.mu_cell[i] = mu;
            t.nu_cell[i] = nu;
            t.mu_cum[i + 1] = t.mu_cum[i] + mu;
            t.nu_cum[i + 1] = t.nu_cum[i] + nu;
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// `n - m`.
    pub fn nm(&self) -> f64 {
        self.n as f64 - self.m
    }

    pub fn c_p(&self) -> f64 {
        self.c_p
    }

    pub fn profile(&self) -> &RadialProfile {
        &self.profile
    }

    pub fn r_max(&self) -> f64 {
        self.profile.r_max
    }

    pub fn closed(&self) -> bool {
        self.profile.closed
    }

    pub fn geodesic(&self) -> &GeodesicQuantities {
        &self.tables
    }

    /// `omega_{n-1}`, the area of the unit `(n-1)`-sphere.
    pub fn omega(&self) -> f64 {
        sphere_area(self.n - 1)
    }

    /// The same profile with a different effective dimension `m`.
    pub fn with_m(&self, m: f64) -> Result<Self> {
        let c_p = if self.profile.potential_at_zero().is_some() {
            None
        } else {
            Some(self.c_p)
        };
        Self::with_table_size(self.n, m, self.profile.clone(), c_p, self.tables.nodes.len() - POLE_LEVELS as usize - 1)
    }

    fn cell(&self, r: f64) -> usize {
        let nodes = &self.tables.nodes;
        nodes.partition_point(|x| *x <= r).saturating_sub(1).min(nodes.len() - 2)
    }

    fn check_closed_range(&self, r: f64) -> Result<()> {
        if !(r >= 0.0) || r > self.profile.r_max {
            return Err(Error::out_of_domain(r, format!("[0, {}]", self.profile.r_max)));
        }
        Ok(())
    }

    // V_gamma at t inside cell i.
    fn v_local(&self, i: usize, t: f64) -> f64 {
        match &self.profile.drift {
            Drift::None => 0.0,
            Drift::Potential(phi) => phi.value(t) - phi.value(0.0),
            Drift::Field(v) => {
                let a = self.tables.nodes[i];
                if t == a {
                    self.tables.v_gamma[i]
                } else {
                    self.tables.v_gamma[i] + gk15(&mut |x| v.value(x), a, t).0
                }
            }
        }
    }

    fn cell_extrema(&self, i: usize, t: f64, v_t: f64) -> (f64, f64) {
        let a = self.tables.nodes[i];
        let v_a = self.tables.v_gamma[i];
        let (mut lo, mut hi) = (v_a.min(v_t), v_a.max(v_t));
        if self.profile.has_drift() && t > a {
            let (da, _) = self.profile.drift(a);
            let (dt, _) = self.profile.drift(t);
            if da * dt < 0.0 {
                if let Ok(root) = roots::bisect(|x| Ok(self.profile.drift(x).0), a, t) {
                    let v_root = self.v_local(i, root);
                    lo = lo.min(v_root);
                    hi = hi.max(v_root);
                }
            }
        }
        (lo, hi)
    }

    fn weight_density(&self, w: Weight, r: f64, v_gamma: f64) -> f64 {
        let f = self.profile.warp.value(r).max(0.0);
        let j = f.powi(self.n as i32 - 1);
        let exponent = match w {
            Weight::Mu => -v_gamma,
            Weight::Nu => -(self.nm() + 2.0) * v_gamma / self.nm(),
        };
        if j == 0.0 {
            0.0
        } else {
            exponent.exp() * j
        }
    }

    /// `V_gamma(r) = int_0^r v`.
    pub fn v_gamma(&self, r: f64) -> Result<f64> {
        self.check_closed_range(r)?;
        Ok(self.v_local(self.cell(r), r))
    }

    /// `phi_V(r)`; equal to `V_gamma` in this model class.
    pub fn phi_v(&self, r: f64) -> Result<f64> {
        self.v_gamma(r)
    }

    /// `sup_{[0, r]} phi_V`.
    pub fn phi_upper(&self, r: f64) -> Result<f64> {
        self.check_closed_range(r)?;
        let i = self.cell(r);
        let (_, hi) = self.cell_extrema(i, r, self.v_local(i, r));
        Ok(self.tables.v_upper[i].max(hi))
    }

    /// `inf_{[0, r]} phi_V`.
    pub fn phi_lower(&self, r: f64) -> Result<f64> {
        self.check_closed_range(r)?;
        let i = self.cell(r);
        let (lo, _) = self.cell_extrema(i, r, self.v_local(i, r));
        Ok(self.tables.v_lower[i].min(lo))
    }

    fn s_local(&self, i: usize, t: f64) -> f64 {
        let a = self.tables.nodes[i];
        let partial = if t == a {
            0.0
        } else {
            let q = self.nm();
            gk15(&mut |x| (-2.0 * self.v_local(i, x) / q).exp(), a, t).0
        };
        self.c_p * (self.tables.s_cum[i] + partial)
    }

    /// `s_p(r) = C_p int_0^r exp(-2 V_gamma / (n - m))`.
    pub fn s_p(&self, r: f64) -> Result<f64> {
        self.check_closed_range(r)?;
        Ok(self.s_local(self.cell(r), r))
    }

    /// `ds_p/dr = C_p exp(-2 V_gamma(r) / (n - m))`.
    pub fn s_p_derivative(&self, r: f64) -> Result<f64> {
        Ok(self.c_p * (-2.0 * self.v_gamma(r)? / self.nm()).exp())
    }

    /// `s_p(r_max)`.
    pub fn s_max(&self) -> f64 {
        self.c_p * self.tables.s_cum[self.tables.s_cum.len() - 1]
    }

    /// The `r` with `s_p(r) = s`.
    pub fn invert_s(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(Error::out_of_domain(s, "s >= 0"));
        }
        let s_max = self.s_max();
        if s >= s_max {
            return Err(Error::OutOfRange { s, limit: s_max });
        }
        if s == 0.0 {
            return Ok(0.0);
        }
        let target = s / self.c_p;
        let cum = &self.tables.s_cum;
        let i = cum.partition_point(|x| *x <= target).saturating_sub(1).min(cum.len() - 2);
        let (a, b) = (self.tables.nodes[i], self.tables.nodes[i + 1]);
        let guess = a + (b - a) * (target - cum[i]) / (cum[i + 1] - cum[i]);
        let q = self.nm();
        roots::newton_bracketed(
            |r| {
                let value = self.s_local(i, r) - s;
                let slope = self.c_p * (-2.0 * self.v_local(i, r) / q).exp();
                Ok((value, slope))
            },
            a,
            b,
            guess,
            4.0 * f64::EPSILON * s,
        )
    }

    /// `(f'/f, f''/f)`, switching to the pole expansion below `POLE_THRESHOLD`.
    pub fn log_derivatives(&self, r: f64) -> Result<(f64, f64)> {
        let r_max = self.profile.r_max;
        if !(r >= 0.0) || r > r_max || (self.profile.closed && r >= r_max) {
            return Err(Error::out_of_domain(r, format!("(0, {r_max})")));
        }
        if r == 0.0 {
            return Err(Error::PoleSingularity);
        }
        if r < POLE_THRESHOLD {
            let (b, c) = (self.pole_b, self.pole_c);
            return Ok((1.0 / r + b + (2.0 * c - b * b) * r, 2.0 * b / r + 6.0 * c - 2.0 * b * b));
        }
        let [f, f1, f2] = self.profile.warp.eval(r);
        Ok((f1 / f, f2 / f))
    }

    /// `Delta r_p = (n - 1) f'/f`.
    pub fn laplacian_r(&self, r: f64) -> Result<f64> {
        Ok((self.n as f64 - 1.0) * self.log_derivatives(r)?.0)
    }

    /// `Delta_V r_p = (n - 1) f'/f - v`.
    pub fn v_laplacian_r(&self, r: f64) -> Result<f64> {
        Ok(self.laplacian_r(r)? - self.profile.drift(r).0)
    }

    /// `Ric_{m,n}(Delta_V)(d_r, d_r) = -(n - 1) f''/f + v' + v^2/(n - m)`.
    pub fn modified_ricci_radial(&self, r: f64) -> Result<f64> {
        let (_, f2) = self.log_derivatives(r)?;
        let (v, dv) = self.profile.drift(r);
        Ok(-(self.n as f64 - 1.0) * f2 + dv + v * v / self.nm())
    }

    /// `lambda = C_p^{-1} e^{2 V_gamma/(n-m)} Delta_V r_p`.
    pub fn lambda(&self, r: f64) -> Result<f64> {
        let lap = self.v_laplacian_r(r)?;
        Ok((2.0 * self.v_gamma(r)? / self.nm()).exp() * lap / self.c_p)
    }

    /// `(J, J_V) = (f^{n-1}, e^{-V_gamma} f^{n-1})`.
    pub fn volume_element(&self, r: f64) -> Result<(f64, f64)> {
        self.check_closed_range(r)?;
        let j = self.profile.warp.value(r).max(0.0).powi(self.n as i32 - 1);
        Ok((j, (-self.v_gamma(r)?).exp() * j))
    }

    fn weighted_panel(&self, w: Weight, i: usize, a: f64, b: f64) -> f64 {
        if a == b {
            return 0.0;
        }
        gk15(&mut |x| self.weight_density(w, x, self.v_local(i, x)), a, b).0
    }

    fn cumulative_weight(&self, w: Weight, r: f64) -> f64 {
        let i = self.cell(r);
        let cum = match w {
            Weight::Mu => &self.tables.mu_cum,
            Weight::Nu => &self.tables.nu_cum,
        };
        cum[i] + self.weighted_panel(w, i, self.tables.nodes[i], r)
    }

    /// Weighted measure of the ball `B_r`.
    pub fn measure_ball(&self, r: f64, w: Weight) -> Result<f64> {
        self.check_closed_range(r)?;
        Ok(self.omega() * self.cumulative_weight(w, r))
    }

    /// `omega_{n-1} int_{r0}^{r1} w(r) f(r)^{n-1} dr`.
    pub fn measure_annulus(&self, r0: f64, r1: f64, w: Weight) -> Result<f64> {
        self.check_closed_range(r0)?;
        self.check_closed_range(r1)?;
        if r0 > r1 {
            return Err(Error::ReversedBounds { lo: r0, hi: r1 });
        }
        if r0 == 0.0 {
            return self.measure_ball(r1, w);
        }
        let (i0, i1) = (self.cell(r0), self.cell(r1));
        let total = if i0 == i1 {
            self.weighted_panel(w, i0, r0, r1)
        } else {
            let cells = match w {
                Weight::Mu => &self.tables.mu_cell,
                Weight::Nu => &self.tables.nu_cell,
            };
            let nodes = &self.tables.nodes;
            self.weighted_panel(w, i0, r0, nodes[i0 + 1])
                + cells[i0 + 1..i1].iter().sum::<f64>()
                + self.weighted_panel(w, i1, nodes[i1], r1)
        };
        Ok(self.omega() * total)
    }

    /// `nu_V({s0 <= s_p <= s1})`.
    pub fn measure_sublevel_s(&self, s0: f64, s1: f64) -> Result<f64> {
        if s0 > s1 {
            return Err(Error::ReversedBounds { lo: s0, hi: s1 });
        }
        let r0 = self.invert_s(s0)?;
        let r1 = self.invert_s(s1)?;
        self.measure_annulus(r0, r1, Weight::Nu)
    }

    /// Adaptive integral of `g(r, V_gamma(r))` over `[a, b]`, split at the table nodes.
    pub fn integrate_with_v<G>(&self, a: f64, b: f64, mut g: G) -> Result<f64>
    where
        G: FnMut(f64, f64) -> f64,
    {
        self.integrate_split(a, b, |i, x| g(x, self.v_local(i, x)))
    }

    /// Adaptive integral of `g(r, V_gamma(r), s_p(r))` over `[a, b]`.
    pub fn integrate_with_s<G>(&self, a: f64, b: f64, mut g: G) -> Result<f64>
    where
        G: FnMut(f64, f64, f64) -> f64,
    {
        self.integrate_split(a, b, |i, x| g(x, self.v_local(i, x), self.s_local(i, x)))
    }

    fn integrate_split<G>(&self, a: f64, b: f64, mut g: G) -> Result<f64>
    where
        G: FnMut(usize, f64) -> f64,
    {
        self.check_closed_range(a)?;
        self.check_closed_range(b)?;
        if a > b {
            return Err(Error::ReversedBounds { lo: a, hi: b });
        }
        let nodes = &self.tables.nodes;
        let mut total = 0.0;
        let mut i = self.cell(a);
        let mut lo = a;
        while lo < b {
            let hi = nodes[i + 1].min(b);
            if hi > lo {
                total += integrate(|x| g(i, x), lo, hi, Tolerance::default())?;
            }
            lo = hi;
            i += 1;
            if i + 1 >= nodes.len() {
                break;
            }
        }
        Ok(total)
    }
}

/// `v(kappa, s0, s1) = omega_{n-1} int_{s0}^{s1} sk^{n-m}`, the weighted model
/// volume of an annulus.
pub fn model_volume(mf: &ModelFunctions, n: usize, m: f64, s0: f64, s1: f64) -> Result<f64> {
    check_dimensions(n, m)?;
    if !(s0 >= 0.0) {
        return Err(Error::out_of_domain(s0, "s0 >= 0"));
    }
    if s0 > s1 {
        return Err(Error::ReversedBounds { lo: s0, hi: s1 });
    }
    let limit = mf.delta().min(mf.s_max());
    if s1 > limit {
        return Err(Error::out_of_domain(s1, format!("[0, {limit}]")));
    }
    if s0 == s1 {
        return Ok(0.0);
    }
    let q = n as f64 - m;
    let integral = integrate(
        |s| mf.sk(s).map(|v| sk_power(v, q)).unwrap_or(f64::NAN),
        s0,
        s1,
        Tolerance::default(),
    )?;
    Ok(sphere_area(n - 1) * integral)
}

/// `nu_p(kappa, r0, r1) = omega_{n-1} int_{r0}^{r1} sk(s_p(r))^{n-m} dr`.
pub fn model_volume_r(mm: &ModelManifold, mf: &ModelFunctions, r0: f64, r1: f64) -> Result<f64> {
    if r0 > r1 {
        return Err(Error::ReversedBounds { lo: r0, hi: r1 });
    }
    let s1 = mm.s_p(r1)?;
    let limit = mf.delta();
    if s1 > limit * (1.0 + 1e-12) {
        return Err(Error::DeltaExceeded { s: s1, limit });
    }
    if s1 > mf.s_max() {
        return Err(Error::out_of_domain(s1, format!("solved range [0, {}]", mf.s_max())));
    }
    if r0 == r1 {
        return Ok(0.0);
    }
    let q = mm.nm();
    let s_cap = mf.s_max();
    let integral = mm.integrate_with_s(r0, r1, |_, _, s| {
        mf.sk(s.min(s_cap)).map(|v| sk_power(v, q)).unwrap_or(f64::NAN)
    })?;
    Ok(mm.omega() * integral)
}

/// `sk^{q}` as `exp(q log sk)`, clamped at zero.
pub(crate) fn sk_power(sk: f64, q: f64) -> f64 {
    if sk <= 0.0 {
        0.0
    } else {
        (q * sk.ln()).exp()
    }
}

/// Convenience constructor for an [`Arc`]-wrapped radial function.
pub fn shared<F: RadialFn + 'static>(f: F) -> SharedFn {
    Arc::new(f)
}
