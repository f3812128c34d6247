//! Low-level numerical building blocks shared by the model and check layers.

pub mod interp;
pub mod ode;
pub mod quadrature;
pub mod roots;

pub use interp::{hermite, CubicSpline};
pub use quadrature::{integrate, Tolerance};

/// Surface area of the unit sphere `S^{d}` embedded in `R^{d+1}`,
/// `2 pi^{(d+1)/2} / Gamma((d+1)/2)`, computed through log-Gamma.
pub fn sphere_area(d: usize) -> f64 {
    let half = (d as f64 + 1.0) / 2.0;
    (std::f64::consts::LN_2 + half * std::f64::consts::PI.ln() - statrs::function::gamma::ln_gamma(half)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(0) - 2.0).abs() < 1e-14);
        assert!((sphere_area(1) - 2.0 * PI).abs() < 1e-13);
        assert!((sphere_area(2) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_area(3) - 2.0 * PI * PI).abs() < 1e-12);
    }
}
