//! Closed-form trajectories of the `(m, n)` focus in generalized polar
//! coordinates `(x, y) = (r^n Cs, r^m Sn)`.

use super::gentrig::GenTrig;
use super::nn::{RadialCoords, SpiralModel};
use super::SpiralError;

/// Generalized radius of the `(m, n)` spiral at generalized angle `phi`.
pub fn eval_spiral_mn(phi: f64, model: &SpiralModel) -> Result<f64, SpiralError> {
    if model.coords != RadialCoords::Generalized {
        return Err(SpiralError::Domain("model is in standard polar coordinates".into()));
    }
    let p = &model.params;
    let gt = GenTrig::shared(p.m(), p.n())?;
    let s = p.orientation().field_sign();
    let g = gt.integral(phi);
    if p.k() == 0 {
        return Ok(model.c * (s * g).exp());
    }
    let e = 2.0 * (p.m() * p.n() * p.k()) as f64;
    let bracket = model.c - s * e * g;
    if !(bracket > 0.0) {
        return Err(SpiralError::OutsideDomain { phi, bracket });
    }
    Ok(bracket.powf(-1.0 / e))
}

/// Cartesian point of the `(m, n)` spiral at generalized angle `phi`.
pub fn point_mn(phi: f64, model: &SpiralModel) -> Result<[f64; 2], SpiralError> {
    let r = eval_spiral_mn(phi, model)?;
    let gt = GenTrig::shared(model.params.m(), model.params.n())?;
    let (cs, sn) = gt.eval(phi);
    Ok([r.powi(model.params.n() as i32) * cs, r.powi(model.params.m() as i32) * sn])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spirals::{eval_spiral_nn, period_t, FocusParams, Orientation};
    use std::f64::consts::PI;

    #[test]
    fn same_curve_as_standard_polar_form() {
        let p = FocusParams::nn(3, 2, Orientation::Stable).unwrap();
        let std_model = SpiralModel::nn(p, 0.5, 0.0).unwrap();
        let gen_model = SpiralModel::mn(p, 0.5f64.powf(1.0 / 3.0), 0.0).unwrap();
        let mut phi = 0.0;
        for i in 1..400 {
            let theta = i as f64 * 0.02;
            let q = point_mn(theta, &gen_model).unwrap();
            // unwrap the standard angle along the sweep
            let d = q[1].atan2(q[0]) - phi;
            phi += (d + PI).rem_euclid(2.0 * PI) - PI;
            let r = eval_spiral_nn(phi, &std_model).unwrap();
            let r_gen = q[0].hypot(q[1]);
            assert!((r - r_gen).abs() < 1e-6 * r, "theta {theta}: {r} vs {r_gen}");
        }
    }

    #[test]
    fn exponential_rate_for_linear_case() {
        let p = FocusParams::new(3, 1, 0, Orientation::Unstable).unwrap();
        let model = SpiralModel::mn(p, 1e-3, 0.0).unwrap();
        let t = period_t(3, 1).unwrap();
        let rate = 2.0 * PI / (3.0 * t);
        let dev: Vec<f64> = (0..2000)
            .map(|i| {
                let phi = i as f64 * 10.0 * t / 2000.0;
                eval_spiral_mn(phi, &model).unwrap().ln() - rate * phi
            })
            .collect();
        let spread = dev.iter().cloned().fold(f64::MIN, f64::max) - dev.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 1.0, "{spread}");
    }

    #[test]
    fn power_envelope() {
        let p = FocusParams::new(3, 1, 1, Orientation::Stable).unwrap();
        let model = SpiralModel::mn(p, 0.5, 0.0).unwrap();
        let t = period_t(3, 1).unwrap();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..5000 {
            let phi = t + i as f64 * 99.0 * t / 5000.0;
            let v = eval_spiral_mn(phi, &model).unwrap() * phi.powf(1.0 / 6.0);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        assert!(lo > 0.1 && hi < 2.0 * lo, "{lo} {hi}");
    }

    #[test]
    fn initial_value() {
        let p = FocusParams::new(5, 3, 1, Orientation::Unstable).unwrap();
        let model = SpiralModel::mn(p, 0.3, 1.7).unwrap();
        assert!((eval_spiral_mn(1.7, &model).unwrap() - 0.3).abs() < 1e-12);
    }
}
