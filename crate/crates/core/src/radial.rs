//! Scalar functions of the radius with two derivatives, used for warping
//! functions, drift fields and potentials.

use std::fmt::Debug;
use std::sync::Arc;

use crate::numerics::CubicSpline;

/// A smooth function of `r >= 0`; `eval` returns `[g(r), g'(r), g''(r)]`.
pub trait RadialFn: Send + Sync + Debug {
    fn eval(&self, r: f64) -> [f64; 3];

    fn value(&self, r: f64) -> f64 {
        self.eval(r)[0]
    }

    /// `g'''(0)`, used by the pole expansion. Defaults to a one-sided
    /// difference of `g''`.
    fn third_at_zero(&self) -> f64 {
        let h = 1e-4;
        let d2 = |r: f64| self.eval(r)[2];
        (-3.0 * d2(0.0) + 4.0 * d2(h) - d2(2.0 * h)) / (2.0 * h)
    }
}

pub type SharedFn = Arc<dyn RadialFn>;

/// `sum_k c_k r^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial(pub Vec<f64>);

impl RadialFn for Polynomial {
    fn eval(&self, r: f64) -> [f64; 3] {
        let mut out = [0.0; 3];
        for &c in self.0.iter().rev() {
            out[2] = out[2] * r + out[1] * 2.0;
            out[1] = out[1] * r + out[0];
            out[0] = out[0] * r + c;
        }
        out
    }

    fn third_at_zero(&self) -> f64 {
        6.0 * self.0.get(3).copied().unwrap_or(0.0)
    }
}

/// `sin(a r) / a`, the warping function of the sphere of curvature `a^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledSine {
    pub a: f64,
}

impl RadialFn for ScaledSine {
    fn eval(&self, r: f64) -> [f64; 3] {
        let (s, c) = (self.a * r).sin_cos();
        [s / self.a, c, -self.a * s]
    }

    fn third_at_zero(&self) -> f64 {
        -self.a * self.a
    }
}

/// `sinh(a r) / a`, hyperbolic space of curvature `-a^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledSinh {
    pub a: f64,
}

impl RadialFn for ScaledSinh {
    fn eval(&self, r: f64) -> [f64; 3] {
        let x = self.a * r;
        [x.sinh() / self.a, x.cosh(), self.a * x.sinh()]
    }

    fn third_at_zero(&self) -> f64 {
        self.a * self.a
    }
}

/// `c / (1 + r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reciprocal {
    pub c: f64,
}

impl RadialFn for Reciprocal {
    fn eval(&self, r: f64) -> [f64; 3] {
        let u = 1.0 / (1.0 + r);
        [self.c * u, -self.c * u * u, 2.0 * self.c * u * u * u]
    }

    fn third_at_zero(&self) -> f64 {
        -6.0 * self.c
    }
}

impl RadialFn for CubicSpline {
    fn eval(&self, r: f64) -> [f64; 3] {
        CubicSpline::eval(self, r)
    }
}

/// `g(r) (1 + eps r^2)`.
#[derive(Debug, Clone)]
pub struct Perturbed {
    pub inner: SharedFn,
    pub eps: f64,
}

impl RadialFn for Perturbed {
    fn eval(&self, r: f64) -> [f64; 3] {
        let [g, g1, g2] = self.inner.eval(r);
        let w = 1.0 + self.eps * r * r;
        [
            g * w,
            g1 * w + 2.0 * self.eps * r * g,
            g2 * w + 4.0 * self.eps * r * g1 + 2.0 * self.eps * g,
        ]
    }

    fn third_at_zero(&self) -> f64 {
        // (g w)''' at 0 with w = 1 + eps r^2, g(0) = 0
        self.inner.third_at_zero() + 6.0 * self.eps * self.inner.eval(0.0)[1]
    }
}
