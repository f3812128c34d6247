#![allow(dead_code)]

use ricci_compare::cli::gallery::Builtin;
use ricci_compare::comparison::model_functions_for;
use ricci_compare::model_functions::{KappaProfile, ModelFunctions};
use ricci_compare::model_manifold::ModelManifold;

pub fn euclidean(m: f64) -> ModelManifold {
    Builtin::Euclidean { r_max: 10.0 }.build(3, m, None).unwrap().manifold
}

pub fn sphere() -> ModelManifold {
    Builtin::Sphere { curvature: 1.0 }.build(3, 1.0, None).unwrap().manifold
}

pub fn hyperbolic() -> ModelManifold {
    Builtin::Hyperbolic { r_max: 5.0 }.build(3, 0.0, None).unwrap().manifold
}

pub fn gaussian() -> ModelManifold {
    Builtin::Gaussian { a: 1.0, r_max: 100.0 }.build(3, 0.0, None).unwrap().manifold
}

pub fn log_weight() -> ModelManifold {
    Builtin::LogWeight { c: 1.0, r_max: 100.0 }.build(3, 0.0, None).unwrap().manifold
}

pub fn constant(mm: &ModelManifold, k: f64) -> ModelFunctions {
    model_functions_for(mm, &KappaProfile::constant(k).unwrap(), 1e-12).unwrap()
}

/// `(name, manifold, kappa, radius)` for the comparison gallery.
pub fn gallery() -> Vec<(&'static str, ModelManifold, f64, f64)> {
    vec![
        ("euclidean m=0", euclidean(0.0), 0.0, 5.0),
        ("euclidean m=-1", euclidean(-1.0), 0.0, 5.0),
        ("euclidean m=1", euclidean(1.0), 0.0, 5.0),
        ("sphere m=1", sphere(), 1.0, std::f64::consts::PI),
        ("hyperbolic m=0", hyperbolic(), -1.0, 5.0),
        ("gaussian m=0", gaussian(), 1.0 / 3.0, 5.0),
    ]
}
