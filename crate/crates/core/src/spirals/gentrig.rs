//! Generalized trigonometric pair `(Cs, Sn)` solving
//! `Cs' = -n Sn^(2n-1)`, `Sn' = m Cs^(2m-1)`, `(Cs, Sn)(0) = (1, 0)`,
//! together with the primitive `G(phi)` of `Sn^(n-1) Cs^(m-1)`.

use std::cell::Cell;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::SpiralError;
use crate::numerics::{log_gamma, solve_monotone, NumericsError, Ode, Tolerance};

const NODES: usize = 4096;

/// One period of `(Cs, Sn, G)` tabulated on a uniform grid and evaluated by
/// quintic Hermite interpolation.
#[derive(Debug)]
pub struct GenTrig {
    m: u32,
    n: u32,
    period: f64,
    step: f64,
    nodes: Vec<[f64; 3]>,
}

fn powi_or_zero(coef: f64, x: f64, e: i32) -> f64 {
    if coef == 0.0 {
        0.0
    } else {
        coef * x.powi(e)
    }
}

impl GenTrig {
    fn field(&self, s: &[f64; 3]) -> [f64; 3] {
        gen_field(s, self.m, self.n)
    }

    fn second(&self, s: &[f64; 3]) -> [f64; 3] {
        let (m, n) = (self.m as i32, self.n as i32);
        let (mf, nf) = (m as f64, n as f64);
        let [cs, sn, _] = *s;
        let [dcs, dsn, _] = self.field(s);
        let ddcs = -nf * powi_or_zero(2.0 * nf - 1.0, sn, 2 * n - 2) * dsn;
        let ddsn = mf * powi_or_zero(2.0 * mf - 1.0, cs, 2 * m - 2) * dcs;
        let ddg = powi_or_zero(nf - 1.0, sn, n - 2) * dsn * cs.powi(m - 1)
            + sn.powi(n - 1) * powi_or_zero(mf - 1.0, cs, m - 2) * dcs;
        [ddcs, ddsn, ddg]
    }

    /// Build the table by integrating node to node with energy projection.
    pub fn build(m: u32, n: u32) -> Result<GenTrig, SpiralError> {
        if m == 0 || n == 0 {
            return Err(SpiralError::Domain("m and n must be at least 1".into()));
        }
        let period = period_t(m, n)?;
        let step = period / NODES as f64;
        let tol = Tolerance::new(1e-15, 1e-14, 1_000_000)?;
        let mut nodes = Vec::with_capacity(NODES + 1);
        let mut state = [1.0, 0.0, 0.0];
        nodes.push(state);
        for _ in 0..NODES {
            let traj = Ode::new(|s: &[f64; 3]| gen_field(s, m, n), tol)
                .with_projection(|s| project(s, m, n))
                .run(state, step)?;
            state = traj.last().1;
            nodes.push(state);
        }
        // the returned point is (1, 0) up to integration error
        let g_period = state[2];
        nodes[NODES] = [1.0, 0.0, g_period];
        Ok(GenTrig {
            m,
            n,
            period,
            step,
            nodes,
        })
    }

    /// Process-wide table for `(m, n)`, built on first use.
    pub fn shared(m: u32, n: u32) -> Result<Arc<GenTrig>, SpiralError> {
        type Cache = Mutex<HashMap<(u32, u32), Arc<GenTrig>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(t) = cache.lock().expect("cache lock").get(&(m, n)) {
            return Ok(t.clone());
        }
        // built outside the lock; a concurrent duplicate build is harmless
        let table = Arc::new(GenTrig::build(m, n)?);
        let mut guard = cache.lock().expect("cache lock");
        Ok(guard.entry((m, n)).or_insert(table).clone())
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// `G(T)`, the integral of `Sn^(n-1) Cs^(m-1)` over one period.
    pub fn integral_over_period(&self) -> f64 {
        self.nodes[NODES][2]
    }

    fn reduce(&self, phi: f64) -> (f64, f64) {
        let l = (phi / self.period).floor();
        let psi = (phi - l * self.period).clamp(0.0, self.period);
        (l, psi)
    }

    fn interpolate(&self, psi: f64) -> [f64; 3] {
        let x = psi / self.step;
        let i = (x.floor() as usize).min(NODES - 1);
        let t = x - i as f64;
        let h = self.step;
        let (p0, p1) = (self.nodes[i], self.nodes[i + 1]);
        let (v0, v1) = (self.field(&p0), self.field(&p1));
        let (a0, a1) = (self.second(&p0), self.second(&p1));
        let (t2, t3) = (t * t, t * t * t);
        let (t4, t5) = (t3 * t, t3 * t2);
        let h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        let h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        let h2 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
        let h3 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
        let h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
        let h5 = 0.5 * (t3 - 2.0 * t4 + t5);
        let mut out = [0.0; 3];
        for j in 0..3 {
            out[j] = p0[j] * h0
                + h * v0[j] * h1
                + h * h * a0[j] * h2
                + p1[j] * h3
                + h * v1[j] * h4
                + h * h * a1[j] * h5;
        }
        out
    }

    /// `(Cs(phi), Sn(phi))` for any real `phi`.
    pub fn eval(&self, phi: f64) -> (f64, f64) {
        let (_, psi) = self.reduce(phi);
        let [cs, sn, _] = self.interpolate(psi);
        (cs, sn)
    }

    /// `G(phi)`, continued past one period by `G(phi + T) = G(phi) + G(T)`.
    pub fn integral(&self, phi: f64) -> f64 {
        let (l, psi) = self.reduce(phi);
        l * self.integral_over_period() + self.interpolate(psi)[2]
    }
}

fn gen_field(s: &[f64; 3], m: u32, n: u32) -> [f64; 3] {
    let (m, n) = (m as i32, n as i32);
    let [cs, sn, _] = *s;
    [
        -(n as f64) * sn.powi(2 * n - 1),
        m as f64 * cs.powi(2 * m - 1),
        sn.powi(n - 1) * cs.powi(m - 1),
    ]
}

/// Pull `(Cs, Sn)` back onto `Cs^2m + Sn^2n = 1` along the quasi-homogeneous
/// ray `(lambda^(1/2m) Cs, lambda^(1/2n) Sn)`.
fn project(s: &mut [f64; 3], m: u32, n: u32) {
    let e = s[0].powi(2 * m as i32) + s[1].powi(2 * n as i32);
    s[0] *= e.powf(-0.5 / m as f64);
    s[1] *= e.powf(-0.5 / n as f64);
}

/// `(Cs(phi), Sn(phi))` from the shared table.
pub fn gen_trig(phi: f64, m: u32, n: u32) -> Result<(f64, f64), SpiralError> {
    Ok(GenTrig::shared(m, n)?.eval(phi))
}

/// Period of `(Cs, Sn)` in closed form,
/// `T = 2/(mn) * Gamma(1/2m) Gamma(1/2n) / Gamma(1/2m + 1/2n)`.
pub fn period_t(m: u32, n: u32) -> Result<f64, SpiralError> {
    if m == 0 || n == 0 {
        return Err(SpiralError::Domain("m and n must be at least 1".into()));
    }
    let a = 0.5 / m as f64;
    let b = 0.5 / n as f64;
    let lb = log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?;
    Ok(2.0 / (m * n) as f64 * lb.exp())
}

/// Period measured by integrating from `(1, 0)` until `Sn` next crosses zero
/// upwards, independent of the closed form.
pub fn period_first_return(m: u32, n: u32) -> Result<f64, SpiralError> {
    let tol = Tolerance::new(1e-14, 1e-13, 2_000_000)?;
    let field = |s: &[f64; 3]| gen_field(s, m, n);
    let went_negative = Cell::new(false);
    let traj = Ode::new(field, tol)
        .with_projection(|s| project(s, m, n))
        .max_step(0.05)
        .stop_when(|s| {
            if s[1] < -0.5 {
                went_negative.set(true);
            }
            went_negative.get() && s[1] >= 0.0
        })
        .run([1.0, 0.0, 0.0], 1e4)?;
    if !traj.stopped {
        return Err(NumericsError::Domain("no return to the start within the horizon".into()).into());
    }
    let k = traj.points.len();
    let (ta, sa) = traj.points[k - 2];
    let (tb, _) = traj.points[k - 1];
    let sn_at = |t: f64| -> f64 {
        Ode::new(field, tol)
            .with_projection(|s| project(s, m, n))
            .run(sa, t - ta)
            .map(|tr| tr.last().1[1])
            .unwrap_or(f64::NAN)
    };
    let root = solve_monotone(sn_at, ta, tb, Tolerance::new(1e-15, 1e-14, 200)?)?;
    Ok(root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn circle_case_is_cos_sin() {
        assert!((period_t(1, 1).unwrap() - TAU).abs() < 1e-13);
        let g = GenTrig::shared(1, 1).unwrap();
        for &phi in &[0.0, 0.3, 1.0, 2.0, 4.0, 100.0, -7.5] {
            let (c, s) = g.eval(phi);
            assert!((c - phi.cos()).abs() < 1e-8 && (s - phi.sin()).abs() < 1e-8, "{phi}");
            let gp = g.integral(phi);
            assert!((gp - phi).abs() < 1e-8);
        }
        assert_eq!(g.eval(0.0), (1.0, 0.0));
    }

    #[test]
    fn quarter_period_corner() {
        let g = GenTrig::shared(3, 1).unwrap();
        let (c, s) = g.eval(g.period() / 4.0);
        assert!(c.abs() < 1e-8 && (s - 1.0).abs() < 1e-8, "{c} {s}");
    }

    #[test]
    fn first_return_matches_gamma_formula() {
        for &(m, n) in &[(1u32, 1u32), (3, 1), (3, 3), (5, 3)] {
            let a = period_t(m, n).unwrap();
            let b = period_first_return(m, n).unwrap();
            assert!((a - b).abs() < 1e-6, "({m},{n}): {a} vs {b}");
        }
    }

    #[test]
    fn period_integral_lemma() {
        for &(m, n) in &[(1u32, 3u32), (3, 3), (5, 3)] {
            let g = GenTrig::shared(m, n).unwrap();
            let expect = 2.0 * PI / (m * n) as f64;
            assert!((g.integral_over_period() - expect).abs() < 1e-8, "({m},{n})");
        }
        for &(m, n) in &[(2u32, 3u32), (3, 2), (2, 2)] {
            let g = GenTrig::build(m, n).unwrap();
            assert!(g.integral_over_period().abs() < 1e-8, "({m},{n})");
        }
    }
}
