//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs as a plain binary (`harness = false`).

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spiraldim::boxcount::{
    cover_counts, fit_dimension, geometric_eps, ChirpCurve, EllipticalProjection, GridOptions, MnSpiralCurve,
    NnSpiralCurve, PlanarCurve, PowerSpiral, ProjectionPlane,
};
use spiraldim::catalog::{dim_chirp, dim_conjecture_mn, dim_degenerate_nn, dim_elliptical, dim_power_spiral, Rational};
use spiraldim::numerics::{LogReal, Ode, Precision, Tolerance};
use spiraldim::sector::{estimate_dimension, K5Mode, SectorReport};
use spiraldim::slowfast::{analyze, ModelSpec, SlowFastAnalysis};
use spiraldim::spirals::{
    eval_spiral_mn, eval_spiral_nn, field3d, integrate_focus, invariant3d_residual, param3d, period_first_return,
    period_t, FocusParams, GenTrig, Orientation, Spiral3DParams, SpiralModel,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

/// Published sector values for `r0 = 1/10`, `phi0 = 0`, `L = 1000`,
/// `eps = 1e-10000`.
const TABLE: [((u32, u32), f64); 4] = [((3, 2), 1.84593), ((3, 11), 1.96992), ((11, 2), 1.95534), ((11, 11), 1.99155)];

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn sector(n: u32, k: u32, eps_log10: f64) -> Result<SectorReport, String> {
    let p = FocusParams::nn(n, k, Orientation::Stable).map_err(|e| e.to_string())?;
    estimate_dimension(p, 0.1, 0.0, 1000, LogReal::pow10(eps_log10), K5Mode::Exact, Precision::default())
        .map_err(|e| e.to_string())
}

fn table_reproduction() -> Check {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for ((n, k), published) in TABLE {
        let r = sector(n, k, -10000.0)?;
        ok &= (r.max_d - published).abs() <= 5e-4 && (r.max_d - r.analytic_d).abs() <= 5e-3;
        parts.push(format!("({n},{k}) {:.5}", r.max_d));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 60.0;
    ensure(ok, format!("{} in {secs:.1} s", parts.join(", ")))
}

fn closed_form_vs_ode() -> Check {
    let mut worst: f64 = 0.0;
    for (n, k) in [(1, 1), (3, 2), (3, 0)] {
        let p = FocusParams::nn(n, k, Orientation::Stable).map_err(|e| e.to_string())?;
        let r0 = 0.5;
        let model = SpiralModel::nn(p, r0, 0.0).map_err(|e| e.to_string())?;
        let run = integrate_focus(&p, [r0, 0.0], 10.0, 1e-15, Tolerance::uniform(1e-13)).map_err(|e| e.to_string())?;
        if run.reached_cutoff {
            return Err(format!("({n},{k}) reached the inner cutoff"));
        }
        for (phi, r) in run.polar() {
            let want = eval_spiral_nn(phi, &model).map_err(|e| e.to_string())?;
            worst = worst.max((r / want - 1.0).abs());
        }
    }
    ensure(worst <= 1e-6, format!("max relative radius error {worst:.2e} over 10 turns"))
}

fn generalized_trig() -> Check {
    let mut energy: f64 = 0.0;
    let mut period: f64 = 0.0;
    for (m, n) in [(1u32, 1u32), (3, 1), (3, 3), (5, 3)] {
        let g = GenTrig::shared(m, n).map_err(|e| e.to_string())?;
        for i in 0..2000 {
            let phi = i as f64 * 3.0 * g.period() / 2000.0;
            let (c, s) = g.eval(phi);
            energy = energy.max((c.powi(2 * m as i32) + s.powi(2 * n as i32) - 1.0).abs());
        }
        let t = period_t(m, n).map_err(|e| e.to_string())?;
        let ret = period_first_return(m, n).map_err(|e| e.to_string())?;
        period = period.max((t - ret).abs());
    }
    let mut lemma: f64 = 0.0;
    for (m, n) in [(1u32, 3u32), (3, 3), (5, 3)] {
        let g = GenTrig::shared(m, n).map_err(|e| e.to_string())?;
        lemma = lemma.max((g.integral_over_period() - TAU / (m * n) as f64).abs());
    }
    let even = GenTrig::build(2, 3).map_err(|e| e.to_string())?.integral_over_period().abs();
    ensure(
        energy <= 1e-10 && period <= 1e-6 && lemma <= 1e-8 && even <= 1e-8,
        format!("energy {energy:.1e}, period {period:.1e}, odd integrals {lemma:.1e}, even integral {even:.1e}"),
    )
}

/// Largest over smallest of `f` on a uniform grid of `[a, b]`.
fn spread(a: f64, b: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let v: Vec<f64> = (0..=4000).map(|i| f(a + (b - a) * i as f64 / 4000.0)).collect();
    (v.iter().copied().fold(f64::INFINITY, f64::min), v.iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

fn comparability() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_ratio: f64 = 1.0;
    let mut worst_drift: f64 = 0.0;
    for _ in 0..48 {
        let n = [1u32, 3, 5][rng.gen_range(0..3)];
        let m = n + 2 * rng.gen_range(0..2u32);
        let k = rng.gen_range(0..4u32);
        let r0 = rng.gen_range(0.2..1.0);
        let phi0 = rng.gen_range(0.0..TAU);
        let p = FocusParams::new(m, n, k, Orientation::Stable).map_err(|e| e.to_string())?;
        let (model, eval): (_, fn(f64, &SpiralModel) -> _) = if m == n {
            (SpiralModel::nn(p, r0, phi0), eval_spiral_nn)
        } else {
            (SpiralModel::mn(p, r0, phi0), eval_spiral_mn)
        };
        let model = model.map_err(|e| e.to_string())?;
        let r = |phi: f64| eval(phi, &model).expect("stable spirals are defined for all later angles");
        let (a, b) = (phi0 + 2.0 * PI, phi0 + 200.0 * PI);
        if k > 0 {
            let e = 1.0 / (2 * m * n * k) as f64;
            let (lo, hi) = spread(a, b, |phi| r(phi) * phi.powf(e));
            if lo.is_nan() || lo <= 0.0 {
                return Err(format!("({m},{n},{k}) ratio reaches {lo}"));
            }
            worst_ratio = worst_ratio.max(hi / lo);
        } else {
            let rate = if m == n { 1.0 / n as f64 } else { TAU / (period_t(m, n).unwrap() * (m * n) as f64) };
            let (lo, hi) = spread(a, b, |phi| r(phi).ln() + rate * phi);
            worst_drift = worst_drift.max(hi - lo);
        }
    }
    ensure(
        worst_ratio < 3.0 && worst_drift < 2.0,
        format!("48 random trajectories: power-law ratio spread {worst_ratio:.3}, log drift spread {worst_drift:.3}"),
    )
}

fn grid_fit(curve: &dyn PlanarCurve, window: (f64, f64)) -> Result<f64, String> {
    let series = cover_counts(curve, geometric_eps(window.0, window.1, 9), &GridOptions::default()).map_err(|e| e.to_string())?;
    Ok(fit_dimension(&series, window).map_err(|e| e.to_string())?.value)
}

fn mid_window() -> (f64, f64) {
    (10f64.powf(-4.5), 10f64.powf(-2.5))
}

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

fn grid_calibration() -> Check {
    let power = grid_fit(&PowerSpiral::new(0.5).map_err(|e| e.to_string())?, mid_window())?;
    let chirp = grid_fit(&ChirpCurve::new(0.5, 1.0).map_err(|e| e.to_string())?, mid_window())?;
    let nn = grid_fit(&NnSpiralCurve::asymptotic(3, 2, 0.02).map_err(|e| e.to_string())?, (1e-5, 1e-3))?;
    let want = (
        dim_power_spiral(r(1, 2)).unwrap().value,
        dim_chirp(r(1, 2), r(1, 1)).unwrap().value,
        dim_degenerate_nn(3, 2).unwrap().value,
    );
    ensure(
        (power - want.0).abs() <= 0.05 && (chirp - want.1).abs() <= 0.1 && (nn - want.2).abs() <= 0.05,
        format!("power {power:.4} (4/3), chirp {chirp:.4} (5/4), (3,2) {nn:.4} (24/13)"),
    )
}

fn conjecture_probe() -> Check {
    let fit = grid_fit(&MnSpiralCurve::asymptotic(3, 1, 1, 0.05).map_err(|e| e.to_string())?, (1e-5, 1e-3))?;
    let want = dim_conjecture_mn(3, 1, 1).unwrap().value;
    ensure((fit - want).abs() <= 0.1, format!("grid {fit:.4} vs conjectured 14/9 = {want:.4}"))
}

fn slowfast_run(degree: u32, y0: f64, count: usize) -> Result<SlowFastAnalysis, String> {
    let spec = ModelSpec {
        n: 1,
        coeffs: vec![(degree, 1.0)],
        x_domain: 0.5,
        y0,
        count,
    };
    analyze(&spec, &GridOptions::default()).map(|(_, a)| a).map_err(|e| e.to_string())
}

fn slowfast_suite() -> Check {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    // (degree of the even term, levels, level exponent, orbit dim and tol, chirp dim and tol)
    for (degree, count, level, orbit, orbit_tol, chirp, chirp_tol) in
        [(2u32, 10_000usize, -2.0, 1.0 / 3.0, 0.03, 1.0, 0.07), (4, 100_000, -2.0 / 3.0, 0.6, 0.05, 1.4, 0.1)]
    {
        let a = slowfast_run(degree, 0.1, count)?;
        let b = slowfast_run(degree, 0.2, count)?;
        let unc = |d: &spiraldim::catalog::DimensionEstimate| d.uncertainty.unwrap_or(0.0);
        let same_orbit = (a.orbit_dimension.value - b.orbit_dimension.value).abs()
            <= unc(&a.orbit_dimension) + unc(&b.orbit_dimension);
        let same_chirp = (a.chirp_dimension.value - b.chirp_dimension.value).abs()
            <= unc(&a.chirp_dimension) + unc(&b.chirp_dimension);
        ok &= (a.asymptotic_ratio - 1.0).abs() <= 0.01
            && (a.level_exponent.slope - level).abs() <= 0.05
            && (a.orbit_dimension.value - orbit).abs() <= orbit_tol
            && (a.chirp_dimension.value - chirp).abs() <= chirp_tol
            && same_orbit
            && same_chirp;
        parts.push(format!(
            "k={}: ratio {:.4}, level exp {:.3}, orbit {:.3}/{:.3}, chirp {:.3}/{:.3} (y0 0.1/0.2)",
            a.codimension,
            a.asymptotic_ratio,
            a.level_exponent.slope,
            a.orbit_dimension.value,
            b.orbit_dimension.value,
            a.chirp_dimension.value,
            b.chirp_dimension.value
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 120.0;
    ensure(ok, format!("{} in {secs:.1} s", parts.join("; ")))
}

fn three_d_suite() -> Check {
    let p = Spiral3DParams::new(0.5, 1.0).map_err(|e| e.to_string())?;
    let field = |s: &[f64; 3]| field3d(*s, &p).expect("trajectory stays in z > 0");
    let traj = Ode::new(field, Tolerance::uniform(1e-12))
        .stop_when(|s| s[2] < 1e-3)
        .run(param3d(1.0, &p), 1e6)
        .map_err(|e| e.to_string())?;
    let residual = traj
        .points
        .iter()
        .map(|(_, s)| invariant3d_residual(*s, &p).map(f64::abs))
        .try_fold(0.0f64, |m, r| r.map(|r| m.max(r)))
        .map_err(|e| e.to_string())?;
    let mut ok = residual <= 1e-6;
    let mut parts = vec![format!("residual {residual:.1e} over {} steps", traj.points.len())];
    let one = r(1, 1);
    for (plane, want) in [
        (ProjectionPlane::Xy, dim_elliptical(r(1, 2), one).unwrap().value),
        (ProjectionPlane::Xz, dim_chirp(r(1, 2), one).unwrap().value),
        (ProjectionPlane::Yz, dim_chirp(one, one).unwrap().value),
    ] {
        let fit = grid_fit(&EllipticalProjection::new(p, plane), mid_window())?;
        ok &= (fit - want).abs() <= 0.1;
        parts.push(format!("{plane:?} {fit:.4} ({want:.4})"));
    }
    ensure(ok, parts.join(", "))
}

fn eps_refinement() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for ((n, k), _) in TABLE {
        let coarse = sector(n, k, -10000.0)?;
        let fine = sector(n, k, -20000.0)?;
        let (a, b) = ((coarse.max_d - coarse.analytic_d).abs(), (fine.max_d - fine.analytic_d).abs());
        ok &= b < a;
        parts.push(format!("({n},{k}) {a:.2e} -> {b:.2e}"));
    }
    ensure(ok, parts.join(", "))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("sector table reproduction", table_reproduction),
        ("closed form vs integrated trajectories", closed_form_vs_ode),
        ("generalized trigonometric suite", generalized_trig),
        ("comparability windows", comparability),
        ("grid oracle calibration", grid_calibration),
        ("conjecture probe (3,1,1)", conjecture_probe),
        ("slow-fast suite", slowfast_suite),
        ("3D suite", three_d_suite),
        ("eps refinement", eps_refinement),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (tag, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} [{}] {name}: {detail}", i + 1);
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
