//! Grid box-counting fits for the built-in curves next to their closed-form
//! dimensions.

use std::time::Instant;

use spiraldim::boxcount::{
    cover_counts, fit_dimension, geometric_eps, ChirpCurve, EllipticalProjection, GridOptions, MnSpiralCurve,
    NnSpiralCurve, PlanarCurve, PowerSpiral, ProjectionPlane,
};
use spiraldim::spirals::Spiral3DParams;

fn report(name: &str, curve: &dyn PlanarCurve, window: (f64, f64), expected: f64) -> Result<(), Box<dyn std::error::Error>> {
    let start = Instant::now();
    let series = cover_counts(curve, geometric_eps(window.0, window.1, 9), &GridOptions::default())?;
    let d = fit_dimension(&series, window)?;
    println!(
        "{name:<28} grid {:.4} +- {:.4}   expected {expected:.4}   ({:.1} s)",
        d.value,
        d.uncertainty.unwrap_or(0.0),
        start.elapsed().as_secs_f64()
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mid = (10f64.powf(-4.5), 10f64.powf(-2.5));
    report("power spiral alpha=1/2", &PowerSpiral::new(0.5)?, mid, 4.0 / 3.0)?;
    report("chirp (1/2, 1)", &ChirpCurve::new(0.5, 1.0)?, mid, 1.25)?;
    report("(n,k) = (1,1)", &NnSpiralCurve::asymptotic(1, 1, 0.2)?, (1e-5, 1e-3), 4.0 / 3.0)?;
    report("(n,k) = (3,2)", &NnSpiralCurve::asymptotic(3, 2, 0.02)?, (1e-5, 1e-3), 24.0 / 13.0)?;
    report("(m,n,k) = (3,1,1)", &MnSpiralCurve::asymptotic(3, 1, 1, 0.05)?, (1e-5, 1e-3), 14.0 / 9.0)?;
    let p = Spiral3DParams::new(0.5, 1.0)?;
    let xy = 2.0 - (p.p0() + p.q0()) / (1.0 + p.q0());
    report("3D xy (1/2, 1)", &EllipticalProjection::new(p, ProjectionPlane::Xy), mid, xy)?;
    report("3D xz (1/2, 1)", &EllipticalProjection::new(p, ProjectionPlane::Xz), mid, 1.5 - p.p0() / 2.0)?;
    report("3D yz (1/2, 1)", &EllipticalProjection::new(p, ProjectionPlane::Yz), mid, 1.5 - p.q0() / 2.0)?;
    Ok(())
}
