//! Bracketed root finding.

use crate::error::{Error, Result};

/// Bisection on `[lo, hi]` down to floating-point resolution of the bracket.
/// `f(lo)` and `f(hi)` must have opposite signs (or one of them vanish).
pub fn bisect<F: FnMut(f64) -> Result<f64>>(mut f: F, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::RootNotBracketed(format!(
            "f({lo}) = {flo:e} and f({hi}) = {fhi:e} share a sign"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fmid = f(mid)?;
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Newton iteration safeguarded by a bracket, for monotone increasing `f`.
/// `f` returns `(value, derivative)`. Stops once `|f| <= ftol`.
pub fn newton_bracketed<F>(mut f: F, mut lo: f64, mut hi: f64, x0: f64, ftol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let mut x = x0.clamp(lo, hi);
    for _ in 0..100 {
        let (fx, dfx) = f(x)?;
        if fx.abs() <= ftol {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let mut next = x - fx / dfx;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if next == x || hi - lo <= f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}
