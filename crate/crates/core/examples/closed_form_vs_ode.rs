//! Integrate the (n, n) focus field numerically and compare the radius with
//! the closed form along ten turns. Writes the (3,2) trajectory as CSV when
//! given a path.

use spiraldim::numerics::Tolerance;
use spiraldim::spirals::{eval_spiral_nn, integrate_focus, point_nn, FocusParams, Frame, Orientation, SpiralModel, TrajectorySample};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r0 = 0.5;
    for (n, k) in [(1, 1), (3, 2), (3, 0), (5, 1)] {
        let p = FocusParams::nn(n, k, Orientation::Stable)?;
        let model = SpiralModel::nn(p, r0, 0.0)?;
        let run = integrate_focus(&p, [r0, 0.0], 10.0, 1e-15, Tolerance::uniform(1e-13))?;
        let mut worst: f64 = 0.0;
        for (phi, r) in run.polar() {
            worst = worst.max((r / eval_spiral_nn(phi, &model)? - 1.0).abs());
        }
        let (phi_end, r_end) = *run.polar().last().expect("at least one point");
        println!(
            "(n,k) = ({n},{k}): {} steps, r = {r_end:.3e} at phi = {phi_end:.2}, max relative error {worst:.2e}",
            run.points.len()
        );
    }
    if let Some(path) = std::env::args().nth(1) {
        let model = SpiralModel::nn(FocusParams::nn(3, 2, Orientation::Stable)?, r0, 0.0)?;
        let phis = (0..20_000).map(|i| i as f64 * 0.01);
        let sample = TrajectorySample::from_fn(Frame::Cartesian2d, phis, |phi| Ok(point_nn(phi, &model)?.to_vec()))?;
        sample.write_csv(std::fs::File::create(&path)?, "(n,k) = (3,2), r0 = 0.5")?;
        println!("wrote {path}");
    }
    Ok(())
}
