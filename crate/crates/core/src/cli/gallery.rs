//! The builtin model manifolds.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::config::{Check, KappaSpec};
use crate::error::Result;
use crate::model_functions::KappaProfile;
use crate::model_manifold::{shared, Drift, ModelManifold, RadialProfile};
use crate::radial::{Polynomial, Reciprocal, ScaledSine, ScaledSinh};
use crate::rigidity::{build_cheng_model_with, symmetric_bump_kappa, MaximalModel};

fn ten() -> f64 {
    10.0
}
fn five() -> f64 {
    5.0
}
fn one() -> f64 {
    1.0
}
fn hundred() -> f64 {
    100.0
}
fn cheng_phi() -> Vec<f64> {
    vec![0.0, 0.0, 0.05]
}

/// A builtin manifold with its parameters. Serialized with the tag `name`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Builtin {
    /// `f = r`, `v = 0`.
    Euclidean {
        #[serde(default = "ten")]
        r_max: f64,
    },
    /// `f = sin(sqrt(K) r)/sqrt(K)`, closed at `pi/sqrt(K)`.
    Sphere {
        #[serde(default = "one")]
        curvature: f64,
    },
    /// `f = sinh r`.
    Hyperbolic {
        #[serde(default = "five")]
        r_max: f64,
    },
    /// `f = r`, potential `a r^2/2`, so `v = a r`.
    Gaussian {
        #[serde(default = "one")]
        a: f64,
        #[serde(default = "hundred")]
        r_max: f64,
    },
    /// `f = r`, radial field `v = c/(1+r)`.
    LogWeight {
        #[serde(default = "one")]
        c: f64,
        #[serde(default = "hundred")]
        r_max: f64,
    },
    /// The equality model over `kappa` with potential `phi` (polynomial
    /// coefficients, `phi'(0) = 0`). `bump = 0` gives `kappa = 1`, otherwise
    /// the symmetric profile `1 + bump s (delta - s)`.
    ChengModel {
        #[serde(default = "cheng_phi")]
        phi: Vec<f64>,
        #[serde(default)]
        bump: f64,
    },
}

/// A built manifold with the defaults its builtin declares.
#[derive(Debug, Clone)]
pub struct Built {
    pub manifold: ModelManifold,
    pub cheng: Option<MaximalModel>,
    pub kappa: KappaSpec,
    pub checks: Vec<Check>,
    pub radius: f64,
    pub horizons: Vec<f64>,
}

impl Builtin {
    pub fn catalog() -> Vec<Builtin> {
        vec![
            Builtin::Euclidean { r_max: ten() },
            Builtin::Sphere { curvature: one() },
            Builtin::Hyperbolic { r_max: five() },
            Builtin::Gaussian {
                a: one(),
                r_max: hundred(),
            },
            Builtin::LogWeight {
                c: one(),
                r_max: hundred(),
            },
            Builtin::ChengModel {
                phi: cheng_phi(),
                bump: 0.0,
            },
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Builtin::Euclidean { .. } => "euclidean",
            Builtin::Sphere { .. } => "sphere",
            Builtin::Hyperbolic { .. } => "hyperbolic",
            Builtin::Gaussian { .. } => "gaussian",
            Builtin::LogWeight { .. } => "log-weight",
            Builtin::ChengModel { .. } => "cheng-model",
        }
    }

    pub fn describe(&self) -> &'static str {
        match self {
            Builtin::Euclidean { .. } => "f = r, v = 0",
            Builtin::Sphere { .. } => "f = sin(sqrt(K) r)/sqrt(K), v = 0, closed",
            Builtin::Hyperbolic { .. } => "f = sinh r, v = 0",
            Builtin::Gaussian { .. } => "f = r, v = a r (potential a r^2/2)",
            Builtin::LogWeight { .. } => "f = r, v = c/(1+r)",
            Builtin::ChengModel { .. } => "equality model, m = 1, potential phi, kappa = 1 or a symmetric bump",
        }
    }

    /// `m` used when the scenario does not set one.
    pub fn default_m(&self) -> f64 {
        match self {
            Builtin::Sphere { .. } | Builtin::ChengModel { .. } => 1.0,
            _ => 0.0,
        }
    }

    pub fn build(&self, n: usize, m: f64, c_p: Option<f64>) -> Result<Built> {
        use Check::*;
        let plain = |warp, drift, r_max, closed| -> Result<ModelManifold> {
            ModelManifold::new(n, m, RadialProfile::new(warp, drift, r_max, closed)?, c_p)
        };
        let constant = |value: f64| KappaSpec::Constant { value };
        let built = match *self {
            Builtin::Euclidean { r_max } => Built {
                manifold: plain(shared(Polynomial(vec![0.0, 1.0])), Drift::None, r_max, false)?,
                cheng: None,
                kappa: constant(0.0),
                checks: vec![Hypothesis, Laplacian, Riccati, Kappa0, VolumeElement, BgS, BgR, BallGrowth],
                radius: 0.5 * r_max,
                horizons: vec![1.0, 2.0, 5.0, r_max],
            },
            Builtin::Sphere { curvature } => {
                let r_max = PI / curvature.sqrt();
                Built {
                    manifold: plain(shared(ScaledSine { a: curvature.sqrt() }), Drift::None, r_max, true)?,
                    cheng: None,
                    kappa: constant(curvature),
                    checks: vec![Laplacian, BgS, Myers, BgR, Riccati, Blowup],
                    radius: r_max,
                    horizons: vec![1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0],
                }
            }
            Builtin::Hyperbolic { r_max } => Built {
                manifold: plain(shared(ScaledSinh { a: 1.0 }), Drift::None, r_max, false)?,
                cheng: None,
                kappa: constant(-1.0),
                checks: vec![Hypothesis, Laplacian, Riccati, VolumeElement, BgS, BgR],
                radius: r_max,
                horizons: vec![1.0, 2.0, r_max],
            },
            Builtin::Gaussian { a, r_max } => Built {
                manifold: plain(
                    shared(Polynomial(vec![0.0, 1.0])),
                    Drift::Potential(shared(Polynomial(vec![0.0, 0.0, 0.5 * a]))),
                    r_max,
                    false,
                )?,
                cheng: None,
                kappa: KappaSpec::BestConstant,
                checks: vec![
                    Hypothesis,
                    Laplacian,
                    Riccati,
                    Myers,
                    Kappa0,
                    VmCompleteness,
                    Ambrose,
                    BgS,
                    BgR,
                    BallGrowth,
                ],
                radius: 5.0f64.min(r_max),
                horizons: vec![1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0],
            },
            Builtin::LogWeight { c, r_max } => Built {
                manifold: plain(shared(Polynomial(vec![0.0, 1.0])), Drift::Field(shared(Reciprocal { c })), r_max, false)?,
                cheng: None,
                kappa: KappaSpec::BestConstant,
                checks: vec![VmCompleteness, Hypothesis, Laplacian, Riccati, BgS, BgR],
                radius: 10.0f64.min(r_max),
                horizons: vec![1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0],
            },
            Builtin::ChengModel { ref phi, bump } => {
                let kappa = if bump == 0.0 {
                    KappaProfile::constant(1.0)?
                } else {
                    symmetric_bump_kappa(bump)?
                };
                let model = build_cheng_model_with(n, &kappa, shared(Polynomial(phi.clone())), c_p)?;
                let spec = if bump == 0.0 { constant(1.0) } else { KappaSpec::Bump { c: bump } };
                Built {
                    manifold: model.base.clone(),
                    radius: model.r_end,
                    cheng: Some(model),
                    kappa: spec,
                    checks: vec![EqualityCase, PoleSmoothness, Laplacian, Riccati, Myers, Blowup, BgS],
                    horizons: vec![1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0],
                }
            }
        };
        Ok(built)
    }
}
