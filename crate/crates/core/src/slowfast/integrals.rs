use serde::{Deserialize, Serialize};

use super::{LienardModel, SlowFastError};
use crate::numerics::{quad, Tolerance};

/// Branch of the critical curve `y = x^2n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `x > 0`
    Attracting,
    /// `x < 0`
    Repelling,
}

pub(crate) fn tol() -> Tolerance {
    Tolerance::new(1e-300, 1e-14, 200_000).expect("constant tolerance is valid")
}

fn check_level(model: &LienardModel, y: f64) -> Result<f64, SlowFastError> {
    if !(y >= 0.0) || y > model.max_level() {
        return Err(SlowFastError::OutsideDomain {
            y,
            limit: model.max_level(),
        });
    }
    Ok(y.powf(0.5 / model.n() as f64))
}

/// `(2n)^2 s^(2n-1) / reduced(±s)`: the integrand of a slow divergence
/// integral after folding the repelling branch onto `s > 0`.
fn folded(model: &LienardModel, side: Side, s: f64) -> f64 {
    let n = model.n() as f64;
    let d = match side {
        Side::Attracting => model.reduced(s),
        Side::Repelling => model.reduced(-s),
    };
    4.0 * n * n * s.powi(2 * model.n() as i32 - 1) / d
}

/// Slow divergence integral from the fast fibre end `±y^(1/2n)` to the
/// contact point.
pub fn slow_div_integral(model: &LienardModel, y: f64, side: Side) -> Result<f64, SlowFastError> {
    let w = check_level(model, y)?;
    Ok(-quad(|s| folded(model, side, s), 0.0, w, tol())?)
}

/// Both sides' integral between two levels `z <= y`, as a positive number:
/// `J(z) - J(y)` on the given side.
pub fn slow_div_between(model: &LienardModel, z: f64, y: f64, side: Side) -> Result<f64, SlowFastError> {
    let (a, b) = (check_level(model, z)?, check_level(model, y)?);
    Ok(quad(|s| folded(model, side, s), a, b, tol())?)
}

/// `J_-(y) - J_+(y)`, integrated from the even part of `F` alone.
pub fn slow_div_difference(model: &LienardModel, y: f64) -> Result<f64, SlowFastError> {
    let w = check_level(model, y)?;
    let n = model.n() as f64;
    let lead = 2 * model.n() as i32 - 1;
    let v = quad(
        |s| 4.0 * n * n * s.powi(lead) * model.reduced_odd_gap(s) / (model.reduced(s) * model.reduced(-s)),
        0.0,
        w,
        tol(),
    )?;
    Ok(-v)
}

/// `(J_- - J_+)(y)` over its leading term `-(8n^2/(2k+1)) f_2k y^((2k+1)/2n)`.
pub fn asymptotic_ratio(model: &LienardModel, y: f64) -> Result<f64, SlowFastError> {
    let k = model.codimension()?;
    let n = model.n() as f64;
    let kk = k as f64;
    let lead = -(8.0 * n * n / (2.0 * kk + 1.0)) * model.coeff(2 * k) * y.powf((2.0 * kk + 1.0) / (2.0 * n));
    Ok(slow_div_difference(model, y)? / lead)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic() -> LienardModel {
        LienardModel::new(1, [(2, 1.0)], 0.5).unwrap()
    }

    #[test]
    fn closed_forms_generic() {
        let m = generic();
        for y in [1e-8f64, 1e-4, 0.01, 0.2] {
            let s = y.sqrt();
            let jm = 4.0 * s + 4.0 * (-s).ln_1p();
            let jp = -4.0 * s + 4.0 * s.ln_1p();
            let am = slow_div_integral(&m, y, Side::Attracting).unwrap();
            let ap = slow_div_integral(&m, y, Side::Repelling).unwrap();
            assert!((am / jm - 1.0).abs() < 1e-12, "{y} {am} {jm}");
            assert!((ap / jp - 1.0).abs() < 1e-12, "{y} {ap} {jp}");
            assert!(am < 0.0 && ap < 0.0);
            // the difference in closed form: 8s + 4 ln((1-s)/(1+s))
            let diff = 8.0 * s + 4.0 * ((1.0 - s) / (1.0 + s)).ln();
            let d = slow_div_difference(&m, y).unwrap();
            if y >= 1e-4 {
                assert!((d / diff - 1.0).abs() < 1e-9, "{y} {d} {diff}");
            }
            assert!(d < 0.0);
        }
    }

    #[test]
    fn asymptotic_ratio_generic() {
        let m = generic();
        let r4 = asymptotic_ratio(&m, 1e-4).unwrap();
        let r8 = asymptotic_ratio(&m, 1e-8).unwrap();
        assert!((r4 - 1.0).abs() < 1e-2, "{r4}");
        assert!((r8 - 1.0).abs() < 1e-4, "{r8}");
        let flipped = LienardModel::new(1, [(2, -1.0)], 0.5).unwrap();
        assert!(asymptotic_ratio(&flipped, 1e-4).unwrap() > 0.0);
        let k2 = LienardModel::new(1, [(4, 1.0)], 0.5).unwrap();
        assert!((asymptotic_ratio(&k2, 1e-4).unwrap() - 1.0).abs() < 1e-2);
    }

    #[test]
    fn vanishing_level() {
        let m = generic();
        let a = slow_div_integral(&m, 1e-14, Side::Attracting).unwrap();
        assert!(a < 0.0 && a > -1e-12);
        assert!(slow_div_integral(&m, 0.3, Side::Attracting).is_err());
    }

    #[test]
    fn between_matches_full_integrals() {
        let m = LienardModel::new(1, [(2, 0.7), (3, 0.2), (4, -0.3)], 0.5).unwrap();
        for side in [Side::Attracting, Side::Repelling] {
            let (z, y) = (0.01, 0.012);
            let a = slow_div_between(&m, z, y, side).unwrap();
            let b = slow_div_integral(&m, z, side).unwrap() - slow_div_integral(&m, y, side).unwrap();
            assert!((a / b - 1.0).abs() < 1e-10);
        }
    }
}
