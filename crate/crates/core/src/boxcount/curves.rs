use std::f64::consts::TAU;
use std::str::FromStr;
use std::sync::Arc;

use super::cover::{Nucleus, PlanarCurve};
use super::BoxCountError;
use crate::spirals::{
    eval_spiral_mn, eval_spiral_nn, param3d, FocusParams, GenTrig, Orientation, RadialCoords, Spiral3DParams,
    SpiralModel,
};

const FAR: f64 = 1e15;

fn check_scale(scale: f64) -> Result<(), BoxCountError> {
    if scale > 0.0 && scale.is_finite() {
        Ok(())
    } else {
        Err(BoxCountError::Domain(format!("scale must be positive, got {scale}")))
    }
}

/// `r = phi^(-alpha)` for `phi >= 1`.
#[derive(Debug, Clone, Copy)]
pub struct PowerSpiral {
    alpha: f64,
}

impl PowerSpiral {
    pub fn new(alpha: f64) -> Result<Self, BoxCountError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(BoxCountError::Domain(format!("need 0 < alpha < 1, got {alpha}")));
        }
        Ok(PowerSpiral { alpha })
    }
}

impl PlanarCurve for PowerSpiral {
    fn point(&self, t: f64) -> [f64; 2] {
        let r = t.powf(-self.alpha);
        let (s, c) = t.sin_cos();
        [r * c, r * s]
    }
    fn start(&self) -> f64 {
        1.0
    }
    fn next_turn(&self, t: f64) -> f64 {
        t + TAU
    }
    fn core(&self, t: f64) -> Nucleus {
        let r = t.powf(-self.alpha);
        Nucleus::QuasiDisk {
            ax: r,
            ay: r,
            px: 2.0,
            py: 2.0,
        }
    }
    fn max_param(&self) -> f64 {
        FAR
    }
}

/// A stable trajectory of the `(n, n)` focus, uniformly scaled by `scale`.
#[derive(Debug, Clone, Copy)]
pub struct NnSpiralCurve {
    model: SpiralModel,
    scale: f64,
}

impl NnSpiralCurve {
    /// Follows `model` from its initial angle on.
    pub fn new(model: SpiralModel, scale: f64) -> Result<Self, BoxCountError> {
        check_scale(scale)?;
        if model.coords != RadialCoords::Standard || model.params.orientation() != Orientation::Stable {
            return Err(BoxCountError::Domain("need a stable (n, n) model in standard polar form".into()));
        }
        Ok(NnSpiralCurve { model, scale })
    }

    /// The trajectory with vanishing integration constant, started at
    /// angle 1. Its radius follows the limiting power law from the first turn, so
    /// moderate box sizes already see asymptotic behaviour.
    pub fn asymptotic(n: u32, k: u32, scale: f64) -> Result<Self, BoxCountError> {
        let params = FocusParams::nn(n, k, Orientation::Stable)
            .map_err(|e| BoxCountError::Domain(e.to_string()))?;
        if k == 0 {
            return Err(BoxCountError::Domain("the power-law start needs k > 0".into()));
        }
        let mut model = SpiralModel {
            params,
            c: 0.0,
            r0: 1.0,
            phi0: 1.0,
            coords: RadialCoords::Standard,
        };
        model.r0 = eval_spiral_nn(1.0, &model).map_err(|e| BoxCountError::Domain(e.to_string()))?;
        NnSpiralCurve::new(model, scale)
    }
}

impl PlanarCurve for NnSpiralCurve {
    fn point(&self, t: f64) -> [f64; 2] {
        // the bracket of a stable model only grows past phi0
        let r = eval_spiral_nn(t, &self.model).unwrap_or(0.0) * self.scale;
        let (s, c) = t.sin_cos();
        [r * c, r * s]
    }
    fn start(&self) -> f64 {
        self.model.phi0
    }
    fn next_turn(&self, t: f64) -> f64 {
        t + TAU
    }
    /// `x^2n + y^2n` decreases along stable trajectories.
    fn core(&self, t: f64) -> Nucleus {
        let n = self.model.params.n() as f64;
        let [x, y] = self.point(t);
        let rho = (x.abs().powf(2.0 * n) + y.abs().powf(2.0 * n)).powf(0.5 / n);
        Nucleus::QuasiDisk {
            ax: rho,
            ay: rho,
            px: 2.0 * n,
            py: 2.0 * n,
        }
    }
    fn max_param(&self) -> f64 {
        FAR
    }
}

/// A stable trajectory of the `(m, n)` focus in generalized polar
/// coordinates, uniformly scaled by `scale`.
#[derive(Debug, Clone)]
pub struct MnSpiralCurve {
    model: SpiralModel,
    trig: Arc<GenTrig>,
    scale: f64,
}

impl MnSpiralCurve {
    pub fn new(model: SpiralModel, scale: f64) -> Result<Self, BoxCountError> {
        check_scale(scale)?;
        if model.coords != RadialCoords::Generalized || model.params.orientation() != Orientation::Stable {
            return Err(BoxCountError::Domain("need a stable model in generalized polar form".into()));
        }
        let trig = GenTrig::shared(model.params.m(), model.params.n()).map_err(|e| BoxCountError::Domain(e.to_string()))?;
        Ok(MnSpiralCurve { model, trig, scale })
    }

    /// Vanishing integration constant, started at generalized angle 1.
    pub fn asymptotic(m: u32, n: u32, k: u32, scale: f64) -> Result<Self, BoxCountError> {
        let params = FocusParams::new(m, n, k, Orientation::Stable).map_err(|e| BoxCountError::Domain(e.to_string()))?;
        if k == 0 {
            return Err(BoxCountError::Domain("the power-law start needs k > 0".into()));
        }
        let mut model = SpiralModel {
            params,
            c: 0.0,
            r0: 1.0,
            phi0: 1.0,
            coords: RadialCoords::Generalized,
        };
        model.r0 = eval_spiral_mn(1.0, &model).map_err(|e| BoxCountError::Domain(e.to_string()))?;
        MnSpiralCurve::new(model, scale)
    }

    fn radius(&self, t: f64) -> f64 {
        eval_spiral_mn(t, &self.model).unwrap_or(0.0)
    }
}

impl PlanarCurve for MnSpiralCurve {
    fn point(&self, t: f64) -> [f64; 2] {
        let r = self.radius(t);
        let (cs, sn) = self.trig.eval(t);
        let p = &self.model.params;
        [
            self.scale * r.powi(p.n() as i32) * cs,
            self.scale * r.powi(p.m() as i32) * sn,
        ]
    }
    fn start(&self) -> f64 {
        self.model.phi0
    }
    fn next_turn(&self, t: f64) -> f64 {
        t + self.trig.period()
    }
    /// The generalized radius decreases, and `x^2m + y^2n = r^2mn`.
    fn core(&self, t: f64) -> Nucleus {
        let r = self.radius(t);
        let p = &self.model.params;
        Nucleus::QuasiDisk {
            ax: self.scale * r.powi(p.n() as i32),
            ay: self.scale * r.powi(p.m() as i32),
            px: 2.0 * p.m() as f64,
            py: 2.0 * p.n() as f64,
        }
    }
    fn max_param(&self) -> f64 {
        FAR
    }
}

/// `y = x^alpha sin(x^-beta)` on `0 < x <= 1`, parametrized by `t = 1/x`.
#[derive(Debug, Clone, Copy)]
pub struct ChirpCurve {
    alpha: f64,
    beta: f64,
}

impl ChirpCurve {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, BoxCountError> {
        if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
            return Err(BoxCountError::Domain(format!("need alpha, beta > 0, got {alpha}, {beta}")));
        }
        Ok(ChirpCurve { alpha, beta })
    }
}

impl PlanarCurve for ChirpCurve {
    fn point(&self, t: f64) -> [f64; 2] {
        [1.0 / t, t.powf(-self.alpha) * t.powf(self.beta).sin()]
    }
    fn start(&self) -> f64 {
        1.0
    }
    fn next_turn(&self, t: f64) -> f64 {
        (t.powf(self.beta) + TAU).powf(1.0 / self.beta)
    }
    fn core(&self, t: f64) -> Nucleus {
        Nucleus::Envelope {
            x_max: 1.0 / t,
            alpha: self.alpha,
            amp: 1.0,
            transpose: false,
        }
    }
    fn max_param(&self) -> f64 {
        FAR
    }
}

/// Coordinate plane a 3D curve is projected to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionPlane {
    Xy,
    Xz,
    Yz,
}

impl FromStr for ProjectionPlane {
    type Err = BoxCountError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "xy" => Ok(ProjectionPlane::Xy),
            "xz" => Ok(ProjectionPlane::Xz),
            "yz" => Ok(ProjectionPlane::Yz),
            _ => Err(BoxCountError::Domain(format!("unknown plane {s:?}; use xy, xz or yz"))),
        }
    }
}

/// Projection of the elliptical power spiral `(t^-p0 cos t, t^-q0 sin t, 1/t)`.
#[derive(Debug, Clone, Copy)]
pub struct EllipticalProjection {
    params: Spiral3DParams,
    plane: ProjectionPlane,
}

impl EllipticalProjection {
    pub fn new(params: Spiral3DParams, plane: ProjectionPlane) -> Self {
        EllipticalProjection { params, plane }
    }
}

impl PlanarCurve for EllipticalProjection {
    fn point(&self, t: f64) -> [f64; 2] {
        let [x, y, z] = param3d(t, &self.params);
        match self.plane {
            ProjectionPlane::Xy => [x, y],
            ProjectionPlane::Xz => [x, z],
            ProjectionPlane::Yz => [y, z],
        }
    }
    fn start(&self) -> f64 {
        1.0
    }
    fn next_turn(&self, t: f64) -> f64 {
        t + TAU
    }
    fn core(&self, t: f64) -> Nucleus {
        let (a, b) = (t.powf(-self.params.p0()), t.powf(-self.params.q0()));
        let envelope = |alpha| Nucleus::Envelope {
            x_max: 1.0 / t,
            alpha,
            amp: 1.0,
            transpose: true,
        };
        match self.plane {
            ProjectionPlane::Xy => Nucleus::QuasiDisk {
                ax: a,
                ay: b,
                px: 2.0,
                py: 2.0,
            },
            ProjectionPlane::Xz => envelope(self.params.p0()),
            ProjectionPlane::Yz => envelope(self.params.q0()),
        }
    }
    fn max_param(&self) -> f64 {
        FAR
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Every sampled point past `t` lies in `core(t)`.
    fn core_contains_tail<C: PlanarCurve>(c: &C, t: f64) {
        let core = c.core(t);
        let t1 = c.next_turn(c.next_turn(c.next_turn(t)));
        for i in 0..=3000 {
            let u = t + (t1 - t) * i as f64 / 3000.0;
            let p = c.point(u).map(|v| v * (1.0 - 1e-9));
            assert!(core.meets_box(p, p), "{u} {p:?} {core:?}");
        }
    }

    #[test]
    fn cores_contain_their_tails() {
        core_contains_tail(&PowerSpiral::new(0.5).unwrap(), 30.0);
        core_contains_tail(&NnSpiralCurve::asymptotic(3, 2, 0.02).unwrap(), 30.0);
        core_contains_tail(&NnSpiralCurve::asymptotic(1, 1, 1.0).unwrap(), 30.0);
        core_contains_tail(&MnSpiralCurve::asymptotic(3, 1, 1, 1.0).unwrap(), 30.0);
        core_contains_tail(&ChirpCurve::new(0.5, 1.0).unwrap(), 30.0);
        let p = Spiral3DParams::new(0.5, 1.0).unwrap();
        for plane in [ProjectionPlane::Xy, ProjectionPlane::Xz, ProjectionPlane::Yz] {
            core_contains_tail(&EllipticalProjection::new(p, plane), 30.0);
        }
    }

    #[test]
    fn asymptotic_start_follows_power_law() {
        // C = 0 gives r^(2nk) w^k (2k phi + P) = 1 exactly, so
        // r phi^(1/12) stays inside the band of w^(-1/6) for (3, 2)
        let c = NnSpiralCurve::asymptotic(3, 2, 1.0).unwrap();
        for phi in [10.0, 1e3, 1e5] {
            let [x, y] = c.point(phi);
            let r = x.hypot(y) * (4.0 * phi).powf(1.0 / 12.0);
            assert!((0.99..1.27).contains(&r), "{phi} {r}");
        }
    }

    #[test]
    fn plane_names() {
        assert_eq!("XZ".parse::<ProjectionPlane>().unwrap(), ProjectionPlane::Xz);
        assert!("zz".parse::<ProjectionPlane>().is_err());
    }
}
