//! Closed-form trajectories of the `(n, n)` focus in standard polar
//! coordinates.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::focus::{trig_weight, FocusParams};
use super::gentrig::GenTrig;
use super::SpiralError;
use crate::numerics::{quad, Tolerance};

/// Continuous branch of `atan(tan^n phi)`, equal to `n` times the integral of
/// `sin^(n-1) cos^(n-1) / (sin^2n + cos^2n)` from 0 to `phi`.
pub fn winding_primitive(phi: f64, n: u32) -> f64 {
    // (cos^n, sin^n) stays in the quadrant of phi, so the branch is the one
    // within pi/2 of phi
    let (s, c) = phi.sin_cos();
    let d = s.powi(n as i32).atan2(c.powi(n as i32)) - phi;
    phi + (d + PI).rem_euclid(TAU) - PI
}

fn weight_integrand(tau: f64, n: u32) -> f64 {
    let (s, c) = tau.sin_cos();
    let n = n as i32;
    s.powi(n - 1) * c.powi(n - 1) / (s.powi(2 * n) + c.powi(2 * n))
}

/// Mean growth rate `I(2 pi) / 2 pi` of the Bernoulli primitive, by quadrature.
pub fn integral_k(n: u32, k: u32) -> Result<f64, SpiralError> {
    if k == 0 {
        return Err(SpiralError::Domain("integral_k needs k >= 1".into()));
    }
    let scale = 2.0 * n as f64 * k as f64;
    let i = quad(|t| weight_integrand(t, n), 0.0, TAU, Tolerance::uniform(1e-13))?;
    Ok(scale * i / TAU)
}

/// Mean decay rate of the linear (`k = 0`) equation, by quadrature.
pub fn integral_k0(n: u32) -> Result<f64, SpiralError> {
    let i = quad(|t| weight_integrand(t, n), 0.0, TAU, Tolerance::uniform(1e-13))?;
    Ok(i / TAU)
}

/// 2 pi-periodic remainder `P` of the Bernoulli primitive `I = K phi + P`.
pub fn periodic_part_p(phi: f64, n: u32, k: u32) -> f64 {
    let l = (phi / TAU).floor();
    let psi = phi - l * TAU;
    2.0 * k as f64 * (winding_primitive(psi, n) - psi)
}

/// Which radial variable a model's closed form is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RadialCoords {
    /// `r = |(x, y)|`
    Standard,
    /// `(x, y) = (r^n Cs, r^m Sn)`
    Generalized,
}

/// A single trajectory: focus parameters plus the integration constant fixed
/// by the initial point `(r0, phi0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpiralModel {
    pub params: FocusParams,
    pub c: f64,
    pub r0: f64,
    pub phi0: f64,
    pub coords: RadialCoords,
}

impl SpiralModel {
    /// Model of the `(n, n)` focus with `r(phi0) = r0` in standard polar
    /// coordinates.
    pub fn nn(params: FocusParams, r0: f64, phi0: f64) -> Result<SpiralModel, SpiralError> {
        if !params.is_nn() {
            return Err(SpiralError::Domain("the standard polar closed form needs m = n".into()));
        }
        if !(r0 > 0.0) || !phi0.is_finite() {
            return Err(SpiralError::Domain(format!("need r0 > 0 and finite phi0, got {r0}, {phi0}")));
        }
        let (n, k) = (params.n(), params.k());
        let sigma = -params.orientation().field_sign();
        let w0 = trig_weight(phi0, n);
        let c = if k == 0 {
            r0 * w0.powf(0.5 / n as f64) * (sigma * winding_primitive(phi0, n) / n as f64).exp()
        } else {
            let nk = (n * k) as f64;
            let kk = 2.0 * k as f64;
            let z0 = (-2.0 * nk * r0.ln() - k as f64 * w0.ln()).exp();
            z0 - sigma * (kk * phi0 + periodic_part_p(phi0, n, k))
        };
        if !c.is_finite() {
            return Err(SpiralError::Domain(format!(
                "integration constant overflows for r0 = {r0}"
            )));
        }
        Ok(SpiralModel {
            params,
            c,
            r0,
            phi0,
            coords: RadialCoords::Standard,
        })
    }

    /// Model of the `(m, n)` focus with generalized radius `r(phi0) = r0`.
    pub fn mn(params: FocusParams, r0: f64, phi0: f64) -> Result<SpiralModel, SpiralError> {
        if !(r0 > 0.0) || !phi0.is_finite() {
            return Err(SpiralError::Domain(format!("need r0 > 0 and finite phi0, got {r0}, {phi0}")));
        }
        let gt = GenTrig::shared(params.m(), params.n())?;
        let s = params.orientation().field_sign();
        let g0 = gt.integral(phi0);
        let k = params.k();
        let c = if k == 0 {
            r0 * (-s * g0).exp()
        } else {
            let e = 2.0 * (params.m() * params.n() * k) as f64;
            r0.powf(-e) + s * e * g0
        };
        if !c.is_finite() {
            return Err(SpiralError::Domain(format!(
                "integration constant overflows for r0 = {r0}"
            )));
        }
        Ok(SpiralModel {
            params,
            c,
            r0,
            phi0,
            coords: RadialCoords::Generalized,
        })
    }
}

/// Radius of the `(n, n)` spiral at polar angle `phi`.
pub fn eval_spiral_nn(phi: f64, model: &SpiralModel) -> Result<f64, SpiralError> {
    if model.coords != RadialCoords::Standard {
        return Err(SpiralError::Domain("model is in generalized polar coordinates".into()));
    }
    let (n, k) = (model.params.n(), model.params.k());
    let sigma = -model.params.orientation().field_sign();
    let w = trig_weight(phi, n);
    if k == 0 {
        let decay = (-sigma * winding_primitive(phi, n) / n as f64).exp();
        return Ok(model.c * w.powf(-0.5 / n as f64) * decay);
    }
    let bracket = model.c + sigma * (2.0 * k as f64 * phi + periodic_part_p(phi, n, k));
    if !(bracket > 0.0) {
        return Err(SpiralError::OutsideDomain { phi, bracket });
    }
    let nk = (n * k) as f64;
    Ok(w.powf(-0.5 / n as f64) * bracket.powf(-0.5 / nk))
}

/// Cartesian point of the `(n, n)` spiral at angle `phi`.
pub fn point_nn(phi: f64, model: &SpiralModel) -> Result<[f64; 2], SpiralError> {
    let r = eval_spiral_nn(phi, model)?;
    let (s, c) = phi.sin_cos();
    Ok([r * c, r * s])
}
