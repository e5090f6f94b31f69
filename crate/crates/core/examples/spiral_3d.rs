//! The 3D elliptical power spiral: follow the field from a point on the
//! invariant surface, check it stays there, and box-count the three
//! coordinate projections.

use spiraldim::boxcount::{cover_counts, fit_dimension, geometric_eps, EllipticalProjection, GridOptions, ProjectionPlane};
use spiraldim::catalog::{dim_chirp, dim_elliptical, parse_rational};
use spiraldim::numerics::{Ode, Tolerance};
use spiraldim::spirals::{field3d, invariant3d_residual, param3d, Spiral3DParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (p0, q0) = (parse_rational("1/2")?, parse_rational("1")?);
    let params = Spiral3DParams::new(0.5, 1.0)?;
    let traj = Ode::new(|s: &[f64; 3]| field3d(*s, &params).expect("z stays positive"), Tolerance::uniform(1e-12))
        .stop_when(|s| s[2] < 1e-3)
        .run(param3d(1.0, &params), 1e6)?;
    let mut worst: f64 = 0.0;
    for (_, s) in &traj.points {
        worst = worst.max(invariant3d_residual(*s, &params)?.abs());
    }
    println!("{} steps down to z = 1e-3, largest surface residual {worst:.2e}", traj.points.len());

    let window = (10f64.powf(-4.5), 10f64.powf(-2.5));
    let one = parse_rational("1")?;
    for (plane, expected) in [
        (ProjectionPlane::Xy, dim_elliptical(p0, q0)?),
        (ProjectionPlane::Xz, dim_chirp(p0, one)?),
        (ProjectionPlane::Yz, dim_chirp(q0, one)?),
    ] {
        let curve = EllipticalProjection::new(params, plane);
        let series = cover_counts(&curve, geometric_eps(window.0, window.1, 9), &GridOptions::default())?;
        let fit = fit_dimension(&series, window)?;
        println!("{plane:?}: grid {:.4} +- {:.4}, expected {:.4}", fit.value, fit.uncertainty.unwrap_or(0.0), expected.value);
    }
    Ok(())
}
