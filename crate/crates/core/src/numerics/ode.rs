//! Dormand-Prince 5(4) integration of autonomous fields with optional
//! invariant projection and stopping predicate.

use super::{NumericsError, Tolerance};

const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
// fifth-order minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Accepted steps of an integration run.
#[derive(Debug, Clone)]
pub struct Trajectory<const N: usize> {
    pub points: Vec<(f64, [f64; N])>,
    /// True when the stopping predicate ended the run before `t_end`.
    pub stopped: bool,
}

impl<const N: usize> Trajectory<N> {
    pub fn last(&self) -> (f64, [f64; N]) {
        *self.points.last().expect("trajectory holds the initial point")
    }
}

type Field<'a, const N: usize> = Box<dyn Fn(&[f64; N]) -> [f64; N] + 'a>;
type Projection<'a, const N: usize> = Box<dyn Fn(&mut [f64; N]) + 'a>;
type Stop<'a, const N: usize> = Box<dyn Fn(&[f64; N]) -> bool + 'a>;

/// Configurable integrator for `x' = field(x)`.
pub struct Ode<'a, const N: usize> {
    field: Field<'a, N>,
    tol: Tolerance,
    projection: Option<Projection<'a, N>>,
    stop: Option<Stop<'a, N>>,
    max_step: f64,
    first_step: Option<f64>,
    euclidean: bool,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, ks: &[[f64; N]], coef: &[f64]) -> [f64; N] {
    let mut out = *y;
    for (k, &c) in ks.iter().zip(coef) {
        if c != 0.0 {
            for i in 0..N {
                out[i] += h * c * k[i];
            }
        }
    }
    out
}

impl<'a, const N: usize> Ode<'a, N> {
    pub fn new<F: Fn(&[f64; N]) -> [f64; N] + 'a>(field: F, tol: Tolerance) -> Self {
        Ode {
            field: Box::new(field),
            tol,
            projection: None,
            stop: None,
            max_step: f64::INFINITY,
            first_step: None,
            euclidean: false,
        }
    }

    /// Map applied to every accepted state, e.g. renormalisation onto an
    /// invariant level set.
    pub fn with_projection<P: Fn(&mut [f64; N]) + 'a>(mut self, p: P) -> Self {
        self.projection = Some(Box::new(p));
        self
    }

    /// Stop after the first accepted state satisfying `pred`.
    pub fn stop_when<S: Fn(&[f64; N]) -> bool + 'a>(mut self, pred: S) -> Self {
        self.stop = Some(Box::new(pred));
        self
    }

    pub fn max_step(mut self, h: f64) -> Self {
        self.max_step = h.abs();
        self
    }

    pub fn first_step(mut self, h: f64) -> Self {
        self.first_step = Some(h.abs());
        self
    }

    /// Measure the local error against the Euclidean norm of the state
    /// instead of component by component. Suits fields whose components pass
    /// through zero while the state as a whole does not.
    pub fn euclidean_norm(mut self) -> Self {
        self.euclidean = true;
        self
    }

    fn error_norm(&self, y: &[f64; N], y_new: &[f64; N], err: &[f64; N]) -> f64 {
        if self.euclidean {
            let norm = |v: &[f64; N]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
            let sc = self.tol.abs + self.tol.rel * norm(y).max(norm(y_new));
            return norm(err) / sc;
        }
        let mut e: f64 = 0.0;
        for i in 0..N {
            let sc = self.tol.abs + self.tol.rel * y[i].abs().max(y_new[i].abs());
            e = e.max(err[i].abs() / sc);
        }
        e
    }

    fn initial_step(&self, y: &[f64; N], f0: &[f64; N], span: f64) -> f64 {
        if let Some(h) = self.first_step {
            return h.min(span);
        }
        let mut d0: f64 = 0.0;
        let mut d1: f64 = 0.0;
        for i in 0..N {
            let sc = self.tol.abs + self.tol.rel * y[i].abs();
            d0 = d0.max(y[i].abs() / sc);
            d1 = d1.max(f0[i].abs() / sc);
        }
        let h = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6 * span
        } else {
            0.01 * d0 / d1
        };
        h.min(span).min(self.max_step)
    }

    /// Integrate from `t = 0`, state `x0`, to `t_end` (which may be negative).
    pub fn run(&self, x0: [f64; N], t_end: f64) -> Result<Trajectory<N>, NumericsError> {
        let dir = if t_end < 0.0 { -1.0 } else { 1.0 };
        let span = t_end.abs();
        let mut t = 0.0f64;
        let mut y = x0;
        let mut points = vec![(t, y)];
        if span == 0.0 {
            return Ok(Trajectory {
                points,
                stopped: false,
            });
        }
        let f = &self.field;
        let mut k0 = f(&y);
        let mut h = self.initial_step(&y, &k0, span);
        let mut evals = 1usize;
        loop {
            let remaining = span - t.abs();
            if remaining <= 0.0 {
                break;
            }
            let last = h >= remaining;
            if last {
                h = remaining;
            }
            let hs = dir * h;
            let mut ks = [[0.0; N]; 7];
            ks[0] = k0;
            ks[1] = f(&axpy(&y, hs, &ks[..1], &A2));
            ks[2] = f(&axpy(&y, hs, &ks[..2], &A3));
            ks[3] = f(&axpy(&y, hs, &ks[..3], &A4));
            ks[4] = f(&axpy(&y, hs, &ks[..4], &A5));
            ks[5] = f(&axpy(&y, hs, &ks[..5], &A6));
            let y_new = axpy(&y, hs, &ks[..6], &B);
            ks[6] = f(&y_new);
            evals += 6;
            let err_vec = {
                let mut e = [0.0; N];
                for (k, &c) in ks.iter().zip(E.iter()) {
                    for i in 0..N {
                        e[i] += hs * c * k[i];
                    }
                }
                e
            };
            let err = self.error_norm(&y, &y_new, &err_vec);
            if !err.is_finite() {
                h *= 0.25;
            } else if err <= 1.0 {
                t = if last { dir * span } else { t + hs };
                y = y_new;
                k0 = ks[6];
                if let Some(p) = &self.projection {
                    p(&mut y);
                    k0 = f(&y);
                    evals += 1;
                }
                points.push((t, y));
                if let Some(s) = &self.stop {
                    if s(&y) {
                        return Ok(Trajectory {
                            points,
                            stopped: true,
                        });
                    }
                }
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                h = (h * factor).min(self.max_step);
            } else {
                h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            }
            if h <= 8.0 * f64::EPSILON * t.abs().max(f64::MIN_POSITIVE) {
                return Err(NumericsError::StepUnderflow { t, h });
            }
            if evals > self.tol.max_evals {
                return Err(NumericsError::NonConvergence {
                    evals,
                    estimate: err,
                });
            }
        }
        Ok(Trajectory {
            points,
            stopped: false,
        })
    }
}

/// Integrate `x' = field(x)` from `x0` over `[0, t_end]`.
pub fn ode_integrate<const N: usize, F: Fn(&[f64; N]) -> [f64; N]>(
    field: F,
    x0: [f64; N],
    t_end: f64,
    tol: Tolerance,
) -> Result<Vec<(f64, [f64; N])>, NumericsError> {
    Ode::new(field, tol).run(x0, t_end).map(|t| t.points)
}
