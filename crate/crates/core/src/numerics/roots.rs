//! Bracketed root finding for monotone functions: regula falsi (Illinois
//! variant) with a bisection fallback whenever the bracket stops halving.

use super::{NumericsError, Tolerance};

pub fn solve_monotone<G: FnMut(f64) -> f64>(
    mut g: G,
    lo: f64,
    hi: f64,
    tol: Tolerance,
) -> Result<f64, NumericsError> {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut ga = g(a);
    let mut gb = g(b);
    let mut evals = 2;
    if ga == 0.0 {
        return Ok(a);
    }
    if gb == 0.0 {
        return Ok(b);
    }
    if !(ga.is_finite() && gb.is_finite()) || ga.signum() == gb.signum() {
        return Err(NumericsError::BadBracket {
            lo: a,
            hi: b,
            g_lo: ga,
            g_hi: gb,
        });
    }
    // which end was retained last, for the Illinois halving
    let mut side = 0i8;
    let mut width_before = b - a;
    let mut iter = 0usize;
    loop {
        let x = if iter % 3 == 2 && (b - a) > 0.5 * width_before {
            0.5 * (a + b)
        } else {
            let s = b - gb * (b - a) / (gb - ga);
            if s > a && s < b {
                s
            } else {
                0.5 * (a + b)
            }
        };
        if iter % 3 == 2 {
            width_before = b - a;
        }
        iter += 1;
        let gx = g(x);
        evals += 1;
        if gx.abs() <= tol.abs || gx == 0.0 {
            return Ok(x);
        }
        if gx.signum() == ga.signum() {
            a = x;
            ga = gx;
            if side == -1 {
                gb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            gb = gx;
            if side == 1 {
                ga *= 0.5;
            }
            side = 1;
        }
        let mid = 0.5 * (a + b);
        if b - a <= tol.rel * mid.abs() || b - a <= f64::EPSILON * mid.abs() {
            return Ok(mid);
        }
        if evals >= tol.max_evals {
            return Err(NumericsError::NonConvergence {
                evals,
                estimate: b - a,
            });
        }
    }
}
