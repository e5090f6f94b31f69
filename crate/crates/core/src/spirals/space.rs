//! The 3D system whose trajectories are elliptical power spirals lying on
//! `x^2/z^(2 p0) + y^2/z^(2 q0) = 1`.

use serde::{Deserialize, Serialize};

use super::SpiralError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spiral3DParams {
    p0: f64,
    q0: f64,
}

impl Spiral3DParams {
    pub fn new(p0: f64, q0: f64) -> Result<Self, SpiralError> {
        if !(0.0 < p0 && p0 <= q0 && q0 <= 1.0) {
            return Err(SpiralError::Domain(format!("need 0 < p0 <= q0 <= 1, got {p0}, {q0}")));
        }
        Ok(Spiral3DParams { p0, q0 })
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }
    pub fn q0(&self) -> f64 {
        self.q0
    }
}

fn check_z(z: f64) -> Result<(), SpiralError> {
    if z > 0.0 {
        Ok(())
    } else {
        Err(SpiralError::Domain(format!("the 3D system lives in z > 0, got z = {z}")))
    }
}

/// Right-hand side of the 3D system.
pub fn field3d(point: [f64; 3], params: &Spiral3DParams) -> Result<[f64; 3], SpiralError> {
    let [x, y, z] = point;
    check_z(z)?;
    let d = params.q0 - params.p0;
    Ok([
        -y - params.p0 * x * z.powf(d + 1.0),
        x * z.powf(2.0 * d) - params.q0 * y * z.powf(d + 1.0),
        -z.powf(2.0 + d),
    ])
}

/// Signed residual of the invariant surface equation.
pub fn invariant3d_residual(point: [f64; 3], params: &Spiral3DParams) -> Result<f64, SpiralError> {
    let [x, y, z] = point;
    check_z(z)?;
    Ok(x * x / z.powf(2.0 * params.p0) + y * y / z.powf(2.0 * params.q0) - 1.0)
}

/// The explicit trajectory `(t^-p0 cos t, t^-q0 sin t, 1/t)`, `t >= 1`.
pub fn param3d(t: f64, params: &Spiral3DParams) -> [f64; 3] {
    let (s, c) = t.sin_cos();
    [t.powf(-params.p0) * c, t.powf(-params.q0) * s, 1.0 / t]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_exponents() {
        assert!(Spiral3DParams::new(0.0, 0.5).is_err());
        assert!(Spiral3DParams::new(0.6, 0.5).is_err());
        assert!(Spiral3DParams::new(0.5, 1.5).is_err());
        assert!(Spiral3DParams::new(0.5, 0.5).is_ok());
    }

    #[test]
    fn substitution_values() {
        let p = Spiral3DParams::new(0.5, 1.0).unwrap();
        assert_eq!(field3d([2.0, 3.0, 1.0], &p).unwrap(), [-3.0 - 1.0, 2.0 - 3.0, -1.0]);
        let q = Spiral3DParams::new(0.25, 0.25).unwrap();
        let [a, b, c] = field3d([1.0, 2.0, 0.5], &q).unwrap();
        assert!((a - (-2.0 - 0.25 * 0.5)).abs() < 1e-15);
        assert!((b - (1.0 - 0.25 * 2.0 * 0.5)).abs() < 1e-15);
        assert!((c + 0.25).abs() < 1e-15);
        assert!(field3d([1.0, 1.0, 0.0], &q).is_err());
    }

    #[test]
    fn field_is_tangent_to_parametrization() {
        let p = Spiral3DParams::new(0.3, 0.7).unwrap();
        for &t in &[1.0, 2.5, 10.0, 40.0] {
            let h = 1e-5 * t;
            let a = param3d(t + h, &p);
            let b = param3d(t - h, &p);
            let tangent: Vec<f64> = (0..3).map(|i| (a[i] - b[i]) / (2.0 * h)).collect();
            let v = field3d(param3d(t, &p), &p).unwrap();
            let dot: f64 = (0..3).map(|i| tangent[i] * v[i]).sum();
            let nt = tangent.iter().map(|x| x * x).sum::<f64>().sqrt();
            let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((dot / (nt * nv) - 1.0).abs() < 1e-6, "t = {t}");
        }
    }

    #[test]
    fn parametrization_lies_on_surface() {
        let p = Spiral3DParams::new(0.2, 0.9).unwrap();
        for i in 0..100 {
            let t = 1.0 + i as f64 * 0.77;
            assert!(invariant3d_residual(param3d(t, &p), &p).unwrap().abs() < 1e-12);
        }
        assert!(invariant3d_residual([0.5f64.powf(0.2), 0.0, 0.5], &p).unwrap().abs() < 1e-15);
    }
}
