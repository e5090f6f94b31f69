//! Numerical integration of the planar focus fields, tracking the unwrapped
//! polar angle alongside the state.

use std::f64::consts::TAU;

use super::focus::{field2d, FocusParams, Orientation};
use super::SpiralError;
use crate::numerics::{Ode, Tolerance};

/// Integrated trajectory as `(t, [x, y, phi])` with `phi` the unwrapped
/// standard polar angle.
#[derive(Debug, Clone)]
pub struct FocusRun {
    pub points: Vec<(f64, [f64; 3])>,
    /// True when the run ended at the inner cutoff radius.
    pub reached_cutoff: bool,
}

impl FocusRun {
    /// `(phi, r)` pairs.
    pub fn polar(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|(_, p)| (p[2], p[0].hypot(p[1]))).collect()
    }
}

/// Follow the trajectory through `start` towards the focus for `turns` full
/// turns or until the radius drops below `inner_cutoff`. Stable foci are
/// integrated forward in time, unstable ones backward.
pub fn integrate_focus(
    params: &FocusParams,
    start: [f64; 2],
    turns: f64,
    inner_cutoff: f64,
    tol: Tolerance,
) -> Result<FocusRun, SpiralError> {
    let r0 = start[0].hypot(start[1]);
    if !(r0 > inner_cutoff) {
        return Err(SpiralError::Domain(format!("start radius {r0} is inside the cutoff {inner_cutoff}")));
    }
    let phi0 = start[1].atan2(start[0]);
    let field = |s: &[f64; 3]| {
        let [u, v] = field2d([s[0], s[1]], params);
        let r2 = s[0] * s[0] + s[1] * s[1];
        [u, v, (s[0] * v - s[1] * u) / r2]
    };
    let sweep = turns * TAU;
    let stop = |s: &[f64; 3]| (s[2] - phi0).abs() >= sweep || s[0].hypot(s[1]) < inner_cutoff;
    let horizon = match params.orientation() {
        Orientation::Stable => 1e300,
        Orientation::Unstable => -1e300,
    };
    let traj = Ode::new(field, tol)
        .euclidean_norm()
        .stop_when(stop)
        .run([start[0], start[1], phi0], horizon)?;
    let reached_cutoff = traj.last().1[0].hypot(traj.last().1[1]) < inner_cutoff;
    Ok(FocusRun {
        points: traj.points,
        reached_cutoff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weak_focus_radius_law() {
        let p = FocusParams::nn(1, 1, Orientation::Stable).unwrap();
        let run = integrate_focus(&p, [1.0, 0.0], 3.0, 1e-6, Tolerance::uniform(1e-11)).unwrap();
        for (phi, r) in run.polar() {
            // r = (2 phi + 1)^(-1/2)
            assert!((r - (2.0 * phi + 1.0).powf(-0.5)).abs() < 1e-8);
        }
        assert!(!run.reached_cutoff);
    }
}
