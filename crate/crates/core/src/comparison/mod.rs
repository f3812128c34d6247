//! Grid-based checks of the comparison theorems on a model manifold.
//!
//! Every check returns a [`ComparisonReport`] (or a [`DivergenceVerdict`] for
//! the improper-integral diagnostics). Conclusions are judged only where the
//! check's own hypothesis holds on the whole grid.

mod divergence;
mod pointwise;
mod report;
mod volume;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model_functions::{solve_jacobi, KappaProfile, ModelFunctions};
use crate::model_manifold::ModelManifold;

pub use divergence::{
    check_ambrose, check_vm_completeness, classify, AmbroseResult, Classification, Compactness,
    DivergenceVerdict,
};
pub use pointwise::{
    check_blowup, check_kappa0_bound, check_kappa0_bound_on, check_laplacian_comparison,
    check_laplacian_comparison_on, check_myers, check_ricci_hypothesis, check_ricci_hypothesis_on,
    check_riccati_inequality, check_riccati_inequality_on, find_best_constant_kappa,
    find_best_constant_kappa_on, BLOWUP_EPSILONS,
};
pub use report::{ComparisonReport, Slack, Table, Verdict};
pub use volume::{
    check_ball_growth, check_bg_r, check_bg_s, check_volume_element, check_volume_element_on,
};

pub const DEFAULT_GRID_SIZE: usize = 2000;

/// `size` geometric points on `[r_max * 1e-5, r_end * (1 - 1e-6)]`.
pub fn default_grid(mm: &ModelManifold, r_end: f64, size: usize) -> Result<Vec<f64>> {
    if size == 0 {
        return Err(Error::EmptyGrid);
    }
    if !(r_end > 0.0) || r_end > mm.r_max() {
        return Err(Error::out_of_domain(r_end, format!("(0, {}]", mm.r_max())));
    }
    let lo = mm.r_max() * 1e-5;
    let hi = r_end * (1.0 - 1e-6);
    if !(hi > lo) {
        return Err(Error::EmptyGrid);
    }
    if size == 1 {
        return Ok(vec![lo]);
    }
    let ratio = (hi / lo).ln() / (size - 1) as f64;
    let mut grid: Vec<f64> = (0..size).map(|i| lo * (ratio * i as f64).exp()).collect();
    grid[size - 1] = hi;
    Ok(grid)
}

/// Solves the Jacobi equation far enough to cover `s_p` on the whole manifold,
/// and for constant positive `kappa` far enough to locate `delta_kappa`.
pub fn model_functions_for(mm: &ModelManifold, kappa: &KappaProfile, tol: f64) -> Result<ModelFunctions> {
    let mut need = mm.s_max();
    if let Some(k) = kappa.constant_value() {
        if k > 0.0 {
            need = need.max(PI / k.sqrt());
        }
    }
    let s_max = (1.05 * need).min(kappa.horizon());
    solve_jacobi(kappa.clone(), s_max, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_manifold::{shared, Drift, RadialProfile};
    use crate::radial::Polynomial;

    #[test]
    fn grid_shape() {
        let p = RadialProfile::new(shared(Polynomial(vec![0.0, 1.0])), Drift::None, 10.0, false).unwrap();
        let mm = ModelManifold::new(3, 0.0, p, None).unwrap();
        let g = default_grid(&mm, 5.0, 2000).unwrap();
        assert_eq!(g.len(), 2000);
        assert!((g[0] - 1e-4).abs() < 1e-18);
        assert_eq!(g[1999], 5.0 * (1.0 - 1e-6));
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert!(matches!(default_grid(&mm, 5.0, 0), Err(Error::EmptyGrid)));
        assert!(default_grid(&mm, 11.0, 10).is_err());
    }
}
