//! Entry-exit orbits of two contact points, with fitted exponents and box
//! dimensions next to the predicted ones.

use std::time::Instant;

use spiraldim::boxcount::GridOptions;
use spiraldim::catalog::to_f64;
use spiraldim::slowfast::{analyze, ModelSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (coeffs, count) in [(vec![(2, 1.0)], 10_000), (vec![(4, 1.0)], 100_000)] {
        for y0 in [0.1, 0.2] {
            let spec = ModelSpec {
                n: 1,
                coeffs: coeffs.clone(),
                x_domain: 0.5,
                y0,
                count,
            };
            let start = Instant::now();
            let (_, a) = analyze(&spec, &GridOptions::default())?;
            let p = &a.predicted;
            println!("F = -x + x^{} (k = {}), y0 = {y0}, {:?}, {:.1} s", coeffs[0].0, a.codimension, a.orientation, start.elapsed().as_secs_f64());
            println!("  ratio at 1e-4     {:.5}", a.asymptotic_ratio);
            println!("  level exponent    {:.4} +- {:.4}  (predicted {:.4})", a.level_exponent.slope, a.level_exponent.stderr, -to_f64(p.level_exp));
            println!("  gap exponent      {:.4} +- {:.4}  (predicted {:.4})", a.gap_exponent.slope, a.gap_exponent.stderr, -to_f64(p.gap_exp));
            let show = |name: &str, d: &spiraldim::catalog::DimensionEstimate, want: f64| {
                println!("  {name:<17} {:.4} +- {:.4}  (predicted {want:.4})", d.value, d.uncertainty.unwrap_or(0.0));
            };
            show("orbit dimension", &a.orbit_dimension, to_f64(p.dim_orbit));
            show("chirp dimension", &a.chirp_dimension, to_f64(p.updim_chirp));
            show("spiral dimension", &a.spiral_dimension, to_f64(p.updim_chirp));
        }
    }
    Ok(())
}
