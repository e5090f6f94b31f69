//! Globally adaptive bisection quadrature with a 10-point Gauss-Legendre rule
//! on every panel.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{NumericsError, Tolerance};

const NODES: [f64; 5] = [
    0.14887433898163122,
    0.4333953941292472,
    0.6794095682990244,
    0.8650633666889845,
    0.9739065285171717,
];
const WEIGHTS: [f64; 5] = [
    0.295524224714753,
    0.2692667193099965,
    0.219086362515982,
    0.14945134915058036,
    0.06667134430868807,
];

fn gauss<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for (x, w) in NODES.iter().zip(WEIGHTS.iter()) {
        s += w * (f(c - h * x) + f(c + h * x));
    }
    s * h
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Panel) -> bool {
        self.err == o.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Panel) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Panel) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64) -> Panel {
    let m = 0.5 * (a + b);
    let value = gauss(f, a, m) + gauss(f, m, b);
    Panel {
        a,
        b,
        value,
        err: (value - whole).abs(),
    }
}

/// Integral of `f` over `[a, b]` (either orientation).
pub fn quad<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64, NumericsError> {
    if a == b {
        return Ok(0.0);
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(NumericsError::Domain("quad needs finite bounds".into()));
    }
    if b < a {
        return quad(f, b, a, tol).map(|v| -v);
    }
    let whole = gauss(&f, a, b);
    let first = panel(&f, a, b, whole);
    let mut evals = 30;
    let mut total = first.value;
    let mut total_err = first.err;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    loop {
        if !total.is_finite() {
            return Err(NumericsError::Domain("integrand not finite on the interval".into()));
        }
        if tol.accepts(total_err, total) {
            // re-sum to shed accumulated rounding from the running updates
            return Ok(heap.iter().map(|p| p.value).sum());
        }
        if evals + 40 > tol.max_evals {
            return Err(NumericsError::NonConvergence {
                evals,
                estimate: total_err,
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // panel cannot be split further in floating point
            return Err(NumericsError::NonConvergence {
                evals,
                estimate: total_err,
            });
        }
        let left = panel(&f, worst.a, m, gauss(&f, worst.a, m));
        let right = panel(&f, m, worst.b, gauss(&f, m, worst.b));
        evals += 80;
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
    }
}
