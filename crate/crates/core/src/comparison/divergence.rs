use serde::Serialize;

use crate::error::{Error, Result};
use crate::model_manifold::ModelManifold;

const GROWTH_THRESHOLD: f64 = 0.05;
const CAUCHY_TOL: f64 = 1e-8;
// exp overflows past this exponent
const EXP_LIMIT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Divergent,
    Convergent,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Compactness {
    Implied,
    NotImplied,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceVerdict {
    pub classification: Classification,
    /// `(horizon, partial integral)`
    pub partial_integrals: Vec<(f64, f64)>,
    pub fitted_growth_exponent: f64,
    /// Outcome of the `v(t) <= C/t`, `C <= (n - m)/2` test, when it applies.
    pub sufficient_criterion: Option<bool>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmbroseResult {
    pub integral: DivergenceVerdict,
    pub completeness: DivergenceVerdict,
    pub compactness: Compactness,
}

/// Three-valued classification of `I(R)` from partial integrals at increasing
/// horizons, looking at the last decade `[R_last / 10, R_last]`.
///
/// Convergent when `I` changes by at most `1e-8 max(1, |I|)` over the decade;
/// divergent when `I` is infinite or the log-log slope over the decade exceeds
/// 0.05 with `I > 0`.
pub fn classify(partials: &[(f64, f64)]) -> (Classification, f64) {
    let Some(&(r_last, i_last)) = partials.last() else {
        return (Classification::Inconclusive, f64::NAN);
    };
    if i_last == f64::INFINITY {
        return (Classification::Divergent, f64::INFINITY);
    }
    let decade: Vec<(f64, f64)> = partials
        .iter()
        .cloned()
        .filter(|(r, _)| *r >= r_last / 10.0 * (1.0 - 1e-12))
        .collect();
    if decade.len() < 2 || decade.iter().any(|(_, i)| !i.is_finite()) {
        return (Classification::Inconclusive, f64::NAN);
    }
    let exponent = if decade.iter().all(|(_, i)| *i > 0.0) {
        let pts: Vec<(f64, f64)> = decade.iter().map(|(r, i)| (r.ln(), i.ln())).collect();
        let k = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        sxy / sxx
    } else {
        f64::NAN
    };
    let i_first = decade[0].1;
    if (i_last - i_first).abs() <= CAUCHY_TOL * i_last.abs().max(1.0) {
        return (Classification::Convergent, exponent);
    }
    if exponent > GROWTH_THRESHOLD {
        return (Classification::Divergent, exponent);
    }
    (Classification::Inconclusive, exponent)
}

// (horizon, partial integral) pairs plus an optional note on truncation.
type Partials = (Vec<(f64, f64)>, Option<String>);

// Partial integrals of e^{c V_gamma(r)} factor(r) along the radial geodesic.
// Closed models are extended periodically: the geodesic runs back through the
// far pole, so the integrand over [L, 2L] mirrors the one over [0, L].
fn partial_integrals<G>(
    mm: &ModelManifold,
    horizons: &[f64],
    c: f64,
    factor: G,
) -> Result<Partials>
where
    G: Fn(f64) -> f64,
{
    if horizons.is_empty() || horizons.windows(2).any(|w| !(w[1] > w[0])) || horizons.iter().any(|h| !(*h > 0.0)) {
        return Err(Error::InvalidProfile("horizons must be non-empty, positive and increasing".into()));
    }
    let l = mm.r_max();
    let closed = mm.closed();
    let usable: Vec<f64> = horizons.iter().cloned().filter(|h| closed || *h <= l).collect();
    let note = if usable.len() < horizons.len() {
        Some(format!("horizons beyond r_max = {l} dropped"))
    } else {
        None
    };
    // the largest exponent is scaled out so the quadrature never overflows
    let integral = |a: f64, b: f64| -> Result<f64> {
        let top = if c > 0.0 { mm.phi_upper(b)? } else { mm.phi_lower(b)? };
        let scale = (c * top).max(0.0);
        let value = mm.integrate_with_v(a, b, |r, v| (c * v - scale).exp() * factor(r))?;
        Ok(if scale > EXP_LIMIT {
            if value > 0.0 {
                f64::INFINITY
            } else if value < 0.0 {
                f64::NEG_INFINITY
            } else {
                0.0
            }
        } else {
            value * scale.exp()
        })
    };
    let mut out = Vec::with_capacity(usable.len());
    let full = if closed { Some(integral(0.0, l)?) } else { None };
    for &h in &usable {
        let value = match full {
            Some(full) if h > l => {
                let period = 2.0 * l;
                let k = (h / period).floor();
                let rest = h - k * period;
                let tail = if rest <= l {
                    integral(0.0, rest)?
                } else {
                    full + integral(period - rest, l)?
                };
                2.0 * k * full + tail
            }
            _ => integral(0.0, h)?,
        };
        out.push((h, value));
    }
    Ok((out, note))
}

/// Divergence of `int_0^R e^{-2 V_gamma/(n-m)} dt`, i.e. `(V, m)`-completeness.
pub fn check_vm_completeness(mm: &ModelManifold, horizons: &[f64]) -> Result<DivergenceVerdict> {
    let q = mm.nm();
    let (partials, note) = partial_integrals(mm, horizons, -2.0 / q, |_| 1.0)?;
    let (mut classification, exponent) = classify(&partials);
    let criterion = if !mm.closed() && mm.profile().has_drift() {
        let end = partials.last().map(|p| p.0).unwrap_or(0.0);
        if end > 1.0 {
            let steps = 2000;
            let sup = (0..=steps)
                .map(|k| {
                    let t = 1.0 + (end - 1.0) * k as f64 / steps as f64;
                    t * mm.profile().drift(t).0.max(0.0)
                })
                .fold(0.0, f64::max);
            Some(sup <= q / 2.0)
        } else {
            None
        }
    } else {
        None
    };
    if criterion == Some(true) {
        classification = Classification::Divergent;
    }
    Ok(DivergenceVerdict {
        classification,
        partial_integrals: partials,
        fitted_growth_exponent: exponent,
        sufficient_criterion: criterion,
        note,
    })
}

/// Divergence of `int_0^R e^{2 V_gamma/(n-m)} Ric_{m,n}(d_r, d_r) dt`. Compactness
/// is implied only when this integral and the `(V, m)`-completeness integral
/// both diverge.
pub fn check_ambrose(mm: &ModelManifold, horizons: &[f64]) -> Result<AmbroseResult> {
    let q = mm.nm();
    let (partials, note) = partial_integrals(mm, horizons, 2.0 / q, |r| {
        mm.modified_ricci_radial(r).unwrap_or(f64::NAN)
    })?;
    let (classification, exponent) = classify(&partials);
    let integral = DivergenceVerdict {
        classification,
        partial_integrals: partials,
        fitted_growth_exponent: exponent,
        sufficient_criterion: None,
        note,
    };
    let completeness = check_vm_completeness(mm, horizons)?;
    let compactness = if integral.classification == Classification::Divergent
        && completeness.classification == Classification::Divergent
    {
        Compactness::Implied
    } else {
        Compactness::NotImplied
    };
    Ok(AmbroseResult {
        integral,
        completeness,
        compactness,
    })
}
