//! The comparison functions attached to a curvature lower bound `kappa(s)`.
//!
//! `sk` solves the Jacobi equation `sk'' + kappa(s) sk = 0` with `sk(0) = 0`,
//! `sk'(0) = 1`. Its logarithmic derivative `cot_kappa = sk'/sk` solves the
//! Riccati equation `-a' = kappa + a^2`, and `m_kappa = (n - m) cot_kappa` is
//! the model weighted Laplacian of the distance function. The first zero
//! `delta_kappa` of `sk` is the model diameter.
//!
//! The Jacobi form is integrated instead of the Riccati form because its
//! initial data is regular at `s = 0`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{hermite, ode, roots, CubicSpline};

/// Below this `s`, `cot_kappa` switches to the series `1/s - kappa(0) s / 3`.
pub const SERIES_THRESHOLD: f64 = 1e-4;

/// Default integration tolerance (per unit length).
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_STEPS: usize = 40_000_000;

/// Representation of `kappa` as a function of the re-parametrized distance `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaKind {
    Constant {
        value: f64,
    },
    /// Piece `i` is `sum_k coefficients[i][k] * (s - breakpoints[i])^k` on
    /// `[breakpoints[i], breakpoints[i + 1])`; the last piece runs to the horizon.
    PiecewisePolynomial {
        breakpoints: Vec<f64>,
        coefficients: Vec<Vec<f64>>,
    },
    /// Natural cubic spline through the samples.
    SampledGrid {
        s: Vec<f64>,
        kappa: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct KappaProfile {
    kind: KappaKind,
    horizon: f64,
    symmetric_about: Option<f64>,
    spline: Option<CubicSpline>,
}

impl KappaProfile {
    pub fn new(kind: KappaKind, horizon: f64) -> Result<Self> {
        if !(horizon > 0.0) {
            return Err(Error::InvalidProfile(format!("kappa horizon must be positive, got {horizon}")));
        }
        let mut spline = None;
        match &kind {
            KappaKind::Constant { value } => {
                if !value.is_finite() {
                    return Err(Error::NonFiniteKappa { s: 0.0 });
                }
            }
            KappaKind::PiecewisePolynomial {
                breakpoints,
                coefficients,
            } => {
                if !horizon.is_finite() {
                    return Err(Error::InvalidProfile("piecewise kappa needs a finite horizon".into()));
                }
                if breakpoints.is_empty() || breakpoints[0] != 0.0 {
                    return Err(Error::InvalidProfile("breakpoints must start at 0".into()));
                }
                if breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::InvalidProfile("breakpoints must be strictly increasing".into()));
                }
                if coefficients.len() != breakpoints.len() || coefficients.iter().any(|c| c.is_empty()) {
                    return Err(Error::InvalidProfile(
                        "need one non-empty coefficient list per breakpoint".into(),
                    ));
                }
                for i in 1..breakpoints.len() {
                    let left = horner(&coefficients[i - 1], breakpoints[i] - breakpoints[i - 1]);
                    let right = coefficients[i][0];
                    if (left - right).abs() > 1e-10 * (1.0 + left.abs()) {
                        return Err(Error::InvalidProfile(format!(
                            "kappa is discontinuous at s = {}: {left} vs {right}",
                            breakpoints[i]
                        )));
                    }
                }
            }
            KappaKind::SampledGrid { s, kappa } => {
                if !horizon.is_finite() {
                    return Err(Error::InvalidProfile("sampled kappa needs a finite horizon".into()));
                }
                if s.first() != Some(&0.0) {
                    return Err(Error::InvalidProfile("sampled kappa grid must start at 0".into()));
                }
                if *s.last().unwrap() < horizon * (1.0 - 1e-12) {
                    return Err(Error::InvalidProfile(format!(
                        "sampled kappa grid ends at {} before the horizon {horizon}",
                        s.last().unwrap()
                    )));
                }
                spline = Some(CubicSpline::new(s.clone(), kappa.clone())?);
            }
        }
        Ok(KappaProfile {
            kind,
            horizon,
            symmetric_about: None,
            spline,
        })
    }

    /// Constant `kappa` defined on all of `[0, inf)`.
    pub fn constant(value: f64) -> Result<Self> {
        Self::new(KappaKind::Constant { value }, f64::INFINITY)
    }

    /// A single polynomial `sum_k coefficients[k] s^k` on `[0, horizon]`.
    pub fn polynomial(coefficients: Vec<f64>, horizon: f64) -> Result<Self> {
        Self::new(
            KappaKind::PiecewisePolynomial {
                breakpoints: vec![0.0],
                coefficients: vec![coefficients],
            },
            horizon,
        )
    }

    /// Declares `kappa(s) = kappa(delta - s)` and verifies it on a 1001-point
    /// grid of `[0, delta]` to `1e-10`.
    pub fn with_symmetry(mut self, delta: f64) -> Result<Self> {
        check_symmetry(&self, delta)?;
        self.symmetric_about = Some(delta);
        Ok(self)
    }

    pub fn kind(&self) -> &KappaKind {
        &self.kind
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn symmetric_about(&self) -> Option<f64> {
        self.symmetric_about
    }

    pub fn constant_value(&self) -> Option<f64> {
        match self.kind {
            KappaKind::Constant { value } => Some(value),
            _ => None,
        }
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) || s > self.horizon {
            return Err(Error::out_of_domain(s, format!("kappa domain [0, {}]", self.horizon)));
        }
        let value = match &self.kind {
            KappaKind::Constant { value } => *value,
            KappaKind::PiecewisePolynomial {
                breakpoints,
                coefficients,
            } => {
                let i = breakpoints.partition_point(|b| *b <= s).saturating_sub(1);
                horner(&coefficients[i], s - breakpoints[i])
            }
            KappaKind::SampledGrid { .. } => self.spline.as_ref().expect("spline built in new").eval(s)[0],
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::NonFiniteKappa { s })
        }
    }
}

fn horner(coefficients: &[f64], x: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Checks `|kappa(s) - kappa(delta - s)| <= 1e-10` on 1001 points of `[0, delta]`.
pub fn check_symmetry(kappa: &KappaProfile, delta: f64) -> Result<()> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidProfile(format!("symmetry centre needs a finite delta, got {delta}")));
    }
    for i in 0..=1000 {
        let s = delta * i as f64 / 1000.0;
        let mirrored = (delta - s).max(0.0);
        let deviation = (kappa.eval(s)? - kappa.eval(mirrored)?).abs();
        if deviation > 1e-10 {
            return Err(Error::NotSymmetric { delta, s, deviation });
        }
    }
    Ok(())
}

/// Location of the first zero of `sk`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FirstZero {
    At(f64),
    /// No sign change of `sk` on `(0, horizon]`; `min_value` is the smallest
    /// nodal value of `sk` after the origin (small values flag a grazing zero).
    NotDetected { horizon: f64, min_value: f64 },
}

impl FirstZero {
    /// The zero, or `+inf` when none was found within the solved horizon.
    pub fn value(&self) -> f64 {
        match self {
            FirstZero::At(d) => *d,
            FirstZero::NotDetected { .. } => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FirstZero::At(_))
    }
}

impl std::fmt::Display for FirstZero {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FirstZero::At(d) => write!(f, "{d}"),
            FirstZero::NotDetected { horizon, min_value } => {
                write!(f, "+inf (no zero within horizon {horizon}; min sk = {min_value:e})")
            }
        }
    }
}

/// Solved Jacobi pair `(sk, sk')` on a uniform grid with cubic Hermite dense output.
#[derive(Debug, Clone)]
pub struct ModelFunctions {
    kappa: KappaProfile,
    s_max: f64,
    h: f64,
    sk: Vec<f64>,
    sk_prime: Vec<f64>,
    delta: FirstZero,
    tol: f64,
}

/// Integrates the Jacobi equation on `[0, s_max]`.
///
/// Classical RK4 with the fixed step `h = tol^{1/4} * 1e-2`, validated by
/// rerunning at `2h` and bounding the Richardson error estimate by `tol * s_max`.
pub fn solve_jacobi(kappa: KappaProfile, s_max: f64, tol: f64) -> Result<ModelFunctions> {
    if !(s_max > 0.0) || !s_max.is_finite() {
        return Err(Error::out_of_domain(s_max, "s_max > 0"));
    }
    if !(tol > 0.0) {
        return Err(Error::out_of_domain(tol, "tol > 0"));
    }
    if s_max > kappa.horizon() {
        return Err(Error::out_of_domain(
            s_max,
            format!("s_max within the kappa horizon {}", kappa.horizon()),
        ));
    }
    let h_target = tol.powf(0.25) * 1e-2;
    let raw_steps = (s_max / h_target).ceil();
    if raw_steps > MAX_STEPS as f64 {
        return Err(Error::StepUnderflow {
            tol,
            reason: format!("{raw_steps} steps of size {h_target:e} exceed the step budget"),
        });
    }
    let mut steps = (raw_steps as usize).max(16);
    steps += steps % 2;
    let h = s_max / steps as f64;

    let rhs = |s: f64, y: &[f64; 2]| -> Result<[f64; 2]> { Ok([y[1], -kappa.eval(s.min(s_max))? * y[0]]) };
    let fine = ode::rk4_fixed(rhs, 0.0, [0.0, 1.0], h, steps)?;
    let coarse = ode::rk4_fixed(rhs, 0.0, [0.0, 1.0], 2.0 * h, steps / 2)?;
    let mut estimate: f64 = 0.0;
    for (k, c) in coarse.iter().enumerate() {
        let f = &fine[2 * k];
        let scale = 1.0_f64.max(f[0].abs()).max(f[1].abs());
        estimate = estimate.max(((f[0] - c[0]).abs()).max((f[1] - c[1]).abs()) / (15.0 * scale));
    }
    if !(estimate <= tol * s_max.max(1.0)) {
        return Err(Error::StepUnderflow {
            tol,
            reason: format!("step-halving error estimate {estimate:e} with h = {h:e}"),
        });
    }

    let (sk, sk_prime): (Vec<f64>, Vec<f64>) = fine.into_iter().map(|y| (y[0], y[1])).unzip();
    let mut mf = ModelFunctions {
        kappa,
        s_max,
        h,
        sk,
        sk_prime,
        delta: FirstZero::NotDetected {
            horizon: s_max,
            min_value: f64::NAN,
        },
        tol,
    };
    mf.delta = mf.locate_first_zero();
    Ok(mf)
}

impl ModelFunctions {
    pub fn kappa(&self) -> &KappaProfile {
        &self.kappa
    }

    pub fn s_max(&self) -> f64 {
        self.s_max
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    /// The solver nodes `s_i = i h`.
    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.sk.len()).map(move |i| self.node(i))
    }

    pub fn nodal_values(&self) -> (&[f64], &[f64]) {
        (&self.sk, &self.sk_prime)
    }

    fn node(&self, i: usize) -> f64 {
        if i + 1 == self.sk.len() {
            self.s_max
        } else {
            i as f64 * self.h
        }
    }

    /// `(sk(s), sk'(s))` from the dense output.
    pub fn eval(&self, s: f64) -> Result<(f64, f64)> {
        if !(s >= 0.0) || s > self.s_max {
            return Err(Error::out_of_domain(s, format!("solved range [0, {}]", self.s_max)));
        }
        let last = self.sk.len() - 1;
        let i = ((s / self.h) as usize).min(last - 1);
        if s == self.node(i) {
            return Ok((self.sk[i], self.sk_prime[i]));
        }
        let (s0, s1) = (self.node(i), self.node(i + 1));
        Ok(hermite(
            s0,
            s1,
            self.sk[i],
            self.sk[i + 1],
            self.sk_prime[i],
            self.sk_prime[i + 1],
            s,
        ))
    }

    pub fn sk(&self, s: f64) -> Result<f64> {
        Ok(self.eval(s)?.0)
    }

    pub fn sk_prime(&self, s: f64) -> Result<f64> {
        Ok(self.eval(s)?.1)
    }

    pub fn first_zero(&self) -> FirstZero {
        self.delta
    }

    /// `delta_kappa`, or `+inf` when no zero lies within the solved range.
    pub fn delta(&self) -> f64 {
        self.delta.value()
    }

    /// `cot_kappa(s) = sk'(s) / sk(s)` for `0 < s < delta_kappa`.
    pub fn cot_kappa(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) || s >= self.delta() || s > self.s_max {
            return Err(Error::out_of_domain(
                s,
                format!("(0, min(delta_kappa = {}, s_max = {}))", self.delta(), self.s_max),
            ));
        }
        if s < SERIES_THRESHOLD {
            return Ok(1.0 / s - self.kappa.eval(0.0)? * s / 3.0);
        }
        let (v, d) = self.eval(s)?;
        Ok(d / v)
    }

    /// `m_kappa(s) = (n - m) cot_kappa(s)`.
    pub fn m_kappa(&self, s: f64, n: usize, m: f64) -> Result<f64> {
        check_dimensions(n, m)?;
        Ok((n as f64 - m) * self.cot_kappa(s)?)
    }

    fn locate_first_zero(&self) -> FirstZero {
        let mut min_value = f64::INFINITY;
        for i in 1..self.sk.len() {
            let v = self.sk[i];
            if v <= 0.0 {
                if v == 0.0 {
                    return FirstZero::At(self.node(i));
                }
                let (lo, hi) = (self.node(i - 1), self.node(i));
                let root = roots::bisect(|s| self.sk(s), lo, hi).unwrap_or(0.5 * (lo + hi));
                return FirstZero::At(root);
            }
            min_value = min_value.min(v);
        }
        FirstZero::NotDetected {
            horizon: self.s_max,
            min_value,
        }
    }
}

/// The standing assumption `m <= 1 < ... ` and `n > m`.
pub fn check_dimensions(n: usize, m: f64) -> Result<()> {
    if !(m <= 1.0) || !((n as f64) > m) || n < 1 {
        return Err(Error::InvalidDimension { n, m });
    }
    Ok(())
}

/// Closed forms for constant `kappa`: returns `(sk(s), cot_kappa(s))`.
pub fn closed_form_constant(kappa: f64, s: f64) -> Result<(f64, f64)> {
    if !(s > 0.0) {
        return Err(Error::out_of_domain(s, "s > 0"));
    }
    if kappa > 0.0 {
        let root = kappa.sqrt();
        let limit = PI / root;
        if s >= limit {
            return Err(Error::DomainExceeded { s, limit });
        }
        Ok(((root * s).sin() / root, root / (root * s).tan()))
    } else if kappa == 0.0 {
        Ok((s, 1.0 / s))
    } else {
        let root = (-kappa).sqrt();
        Ok(((root * s).sinh() / root, root / (root * s).tanh()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn constant(k: f64, s_max: f64) -> ModelFunctions {
        solve_jacobi(KappaProfile::constant(k).unwrap(), s_max, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn unit_sphere_quarter_period() {
        let mf = constant(1.0, 4.0);
        let (v, d) = mf.eval(FRAC_PI_2).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert!(d.abs() < 1e-12);
    }

    #[test]
    fn flat_case_is_identity() {
        let mf = constant(0.0, 10.0);
        for s in [0.0, 0.123, 3.3, 9.99, 10.0] {
            assert!((mf.sk(s).unwrap() - s).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_branches() {
        let (_, cot) = closed_form_constant(1.0, PI / 4.0).unwrap();
        assert!((cot - 1.0).abs() < 1e-15);
        assert_eq!(closed_form_constant(0.0, 2.0).unwrap(), (2.0, 0.5));
        let (sk, cot) = closed_form_constant(-1.0, 1.0).unwrap();
        assert!((sk - 1f64.sinh()).abs() < 1e-15);
        assert!((cot - 1.0 / 1f64.tanh()).abs() < 1e-15);
    }

    #[test]
    fn closed_form_domain_errors() {
        assert!(matches!(closed_form_constant(1.0, PI), Err(Error::DomainExceeded { .. })));
        assert!(matches!(closed_form_constant(4.0, 2.0), Err(Error::DomainExceeded { .. })));
        assert!(matches!(closed_form_constant(1.0, 0.0), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn cot_kappa_examples() {
        let mf = constant(1.0, 4.0);
        assert!((mf.cot_kappa(PI / 4.0).unwrap() - 1.0).abs() < 1e-10);
        let flat = constant(0.0, 2.0);
        assert!((flat.cot_kappa(0.001).unwrap() - 1000.0).abs() < 1e-8);
        // scaling identity with alpha = 1/2 gives 2 cot(pi/4)
        let four = constant(4.0, 2.0);
        assert!((four.cot_kappa(PI / 8.0).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn cot_kappa_domain() {
        let mf = constant(1.0, 4.0);
        assert!(mf.cot_kappa(0.0).is_err());
        assert!(mf.cot_kappa(-1.0).is_err());
        assert!(mf.cot_kappa(PI + 1e-9).is_err());
        assert!(mf.cot_kappa(3.5).is_err());
    }

    #[test]
    fn series_branch_is_continuous() {
        let mf = constant(1.0, 4.0);
        let s = SERIES_THRESHOLD * (1.0 + 1e-9);
        let dense = mf.cot_kappa(s).unwrap();
        let series = 1.0 / s - s / 3.0;
        assert!((dense - series).abs() / series < 1e-12, "{dense} {series}");
    }

    #[test]
    fn m_kappa_examples() {
        assert!((constant(0.0, 2.0).m_kappa(1.0, 3, 0.0).unwrap() - 3.0).abs() < 1e-12);
        assert!((constant(1.0, 4.0).m_kappa(PI / 4.0, 2, 1.0).unwrap() - 1.0).abs() < 1e-10);
        assert!(constant(1.0, 4.0).m_kappa(FRAC_PI_2, 3, -2.0).unwrap().abs() < 1e-10);
    }

    #[test]
    fn m_kappa_rejects_bad_dimensions() {
        let mf = constant(1.0, 4.0);
        assert!(matches!(mf.m_kappa(1.0, 3, 1.5), Err(Error::InvalidDimension { .. })));
        assert!(matches!(mf.m_kappa(1.0, 1, 1.0), Err(Error::InvalidDimension { .. })));
    }

    #[test]
    fn first_zero_examples() {
        assert!((constant(1.0, 4.0).delta() - PI).abs() < 1e-10);
        let third = constant(1.0 / 3.0, 6.0);
        assert!((third.delta() - PI * 3f64.sqrt()).abs() < 1e-10);
        let flat = constant(0.0, 100.0);
        match flat.first_zero() {
            FirstZero::NotDetected { horizon, min_value } => {
                assert_eq!(horizon, 100.0);
                assert!(min_value > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(flat.delta().is_infinite());
    }

    #[test]
    fn piecewise_polynomial_eval_and_validation() {
        let k = KappaProfile::new(
            KappaKind::PiecewisePolynomial {
                breakpoints: vec![0.0, 1.0],
                coefficients: vec![vec![0.0, 1.0], vec![1.0, 0.0, -1.0]],
            },
            3.0,
        )
        .unwrap();
        assert_eq!(k.eval(0.5).unwrap(), 0.5);
        assert!((k.eval(2.0).unwrap() - 0.0).abs() < 1e-15);
        assert!(k.eval(3.5).is_err());
        let broken = KappaProfile::new(
            KappaKind::PiecewisePolynomial {
                breakpoints: vec![0.0, 1.0],
                coefficients: vec![vec![0.0, 1.0], vec![2.0]],
            },
            3.0,
        );
        assert!(broken.is_err());
    }

    #[test]
    fn sampled_grid_validation() {
        let bad_start = KappaProfile::new(
            KappaKind::SampledGrid {
                s: vec![0.1, 0.5, 1.0],
                kappa: vec![1.0; 3],
            },
            1.0,
        );
        assert!(bad_start.is_err());
        let ok = KappaProfile::new(
            KappaKind::SampledGrid {
                s: vec![0.0, 0.5, 1.0, 1.5],
                kappa: vec![1.0; 4],
            },
            1.5,
        )
        .unwrap();
        assert!((ok.eval(0.7).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn non_finite_kappa_is_reported() {
        let k = KappaProfile::polynomial(vec![f64::MAX, f64::MAX], 10.0).unwrap();
        assert!(matches!(solve_jacobi(k, 5.0, 1e-6), Err(Error::NonFiniteKappa { .. })));
    }

    #[test]
    fn impossible_tolerance_underflows() {
        let k = KappaProfile::constant(1.0).unwrap();
        assert!(matches!(solve_jacobi(k, 10.0, 1e-30), Err(Error::StepUnderflow { .. })));
    }

    #[test]
    fn solve_beyond_horizon_is_rejected() {
        let k = KappaProfile::polynomial(vec![1.0], 2.0).unwrap();
        assert!(solve_jacobi(k, 3.0, 1e-8).is_err());
    }

    #[test]
    fn symmetry_check() {
        let k = KappaProfile::polynomial(vec![1.0, 0.3, -0.1], 10.0).unwrap();
        assert!(k.clone().with_symmetry(3.0).is_ok());
        assert!(matches!(k.with_symmetry(2.0), Err(Error::NotSymmetric { .. })));
    }
}
