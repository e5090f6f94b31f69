//! Render the three plot kinds from in-memory CSV into the temp directory.

use std::fmt::Write as _;

use spiraldim::cli::{render_svg, PlotKind};
use spiraldim::slowfast::{build_chirp, generate_orbit, LienardModel};
use spiraldim::spirals::{point_nn, FocusParams, Orientation, SpiralModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir();

    let model = SpiralModel::nn(FocusParams::nn(3, 2, Orientation::Stable)?, 0.5, 0.0)?;
    let mut spiral = String::from("t,x,y\n");
    for i in 0..30_000 {
        let phi = i as f64 * 0.01;
        let [x, y] = point_nn(phi, &model)?;
        writeln!(spiral, "{phi},{x},{y}")?;
    }

    let orbit = generate_orbit(&LienardModel::new(1, [(2, 1.0)], 0.5)?, 0.1, 40)?;
    let mut chirp = Vec::new();
    build_chirp(&orbit)?.write_csv(&mut chirp)?;

    let counts = "eps,count\n0.1,31\n0.03,151\n0.01,712\n0.003,3270\n0.001,15001\n";

    for (name, data, kind) in [
        ("spiral.svg", spiral.as_bytes(), PlotKind::Spiral),
        ("chirp.svg", chirp.as_slice(), PlotKind::Chirp),
        ("loglog.svg", counts.as_bytes(), PlotKind::Loglog),
    ] {
        let path = dir.join(name);
        std::fs::write(&path, render_svg(data, kind)?)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
