//! Fixed-step classical Runge-Kutta with compensated state accumulation.

use crate::error::Result;

/// Integrates `y' = rhs(t, y)` from `t0` over `steps` steps of size `h`,
/// returning the state at every node (including the initial one).
///
/// The state update uses Kahan summation so the round-off drift stays at a
/// few ulps even for several hundred thousand steps.
pub fn rk4_fixed<const N: usize, F>(
    mut rhs: F,
    t0: f64,
    y0: [f64; N],
    h: f64,
    steps: usize,
) -> Result<Vec<[f64; N]>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let mut out = Vec::with_capacity(steps + 1);
    let mut y = y0;
    let mut comp = [0.0; N];
    out.push(y);
    for k in 0..steps {
        let t = t0 + k as f64 * h;
        let k1 = rhs(t, &y)?;
        let k2 = rhs(t + 0.5 * h, &axpy(&y, 0.5 * h, &k1))?;
        let k3 = rhs(t + 0.5 * h, &axpy(&y, 0.5 * h, &k2))?;
        let k4 = rhs(t + h, &axpy(&y, h, &k3))?;
        for i in 0..N {
            let incr = h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
            let corrected = incr - comp[i];
            let next = y[i] + corrected;
            comp[i] = (next - y[i]) - corrected;
            y[i] = next;
        }
        out.push(y);
    }
    Ok(out)
}

fn axpy<const N: usize>(y: &[f64; N], a: f64, x: &[f64; N]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        out[i] += a * x[i];
    }
    out
}
