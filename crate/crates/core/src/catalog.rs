//! Box dimensions known in closed form, in exact rational arithmetic.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("{name} = {value} is even: the system has a center, not a focus")]
    EvenExponent { name: &'static str, value: u32 },
    #[error("the formula needs m >= n, got m = {m}, n = {n}; swap x and y to reorder")]
    Order { m: u32, n: u32 },
    #[error("domain error: {0}")]
    Domain(String),
}

/// How a dimension value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Analytic,
    Conjecture,
    Sector,
    Grid,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Analytic => "analytic",
            Method::Conjecture => "conjecture",
            Method::Sector => "sector",
            Method::Grid => "grid",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionEstimate {
    pub value: f64,
    #[serde(serialize_with = "ser_exact", skip_serializing_if = "Option::is_none")]
    pub value_exact: Option<Rational>,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_range: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uncertainty: Option<f64>,
}

fn ser_exact<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&format!("{}/{}", r.numer(), r.denom())),
        None => s.serialize_none(),
    }
}

impl DimensionEstimate {
    fn exact(value: Rational, method: Method) -> DimensionEstimate {
        DimensionEstimate {
            value: to_f64(value),
            value_exact: Some(value),
            method,
            epsilon_range: None,
            uncertainty: None,
        }
    }

    /// A numerical estimate over `[eps_min, eps_max]` with optional standard
    /// error.
    pub fn numeric(value: f64, method: Method, epsilon_range: (f64, f64), uncertainty: Option<f64>) -> DimensionEstimate {
        DimensionEstimate {
            value,
            value_exact: None,
            method,
            epsilon_range: Some(epsilon_range),
            uncertainty,
        }
    }
}

pub fn to_f64(r: Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parse `p/q`, an integer, or a plain decimal such as `0.25` exactly.
pub fn parse_rational(s: &str) -> Result<Rational, CatalogError> {
    let s = s.trim();
    let bad = || CatalogError::Domain(format!("not a rational number: {s:?}"));
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let whole: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10i64.pow(frac.len() as u32);
        let f: i64 = frac.parse().map_err(|_| bad())?;
        let num = whole.abs() * den + f;
        return Ok(Rational::new(if neg { -num } else { num }, den));
    }
    s.parse::<Rational>().map_err(|_| bad())
}

fn int(v: u32) -> Rational {
    Rational::from_integer(v as i64)
}

fn require_odd(name: &'static str, value: u32) -> Result<(), CatalogError> {
    if value == 0 {
        return Err(CatalogError::Domain(format!("{name} must be at least 1")));
    }
    if value.is_multiple_of(2) {
        return Err(CatalogError::EvenExponent { name, value });
    }
    Ok(())
}

/// Spiral trajectories of the `(n, n)` focus: `2 - 2/(1 + 2kn)` for `k > 0`,
/// `1` for `k = 0`.
pub fn dim_degenerate_nn(n: u32, k: u32) -> Result<DimensionEstimate, CatalogError> {
    require_odd("n", n)?;
    let two = int(2);
    let v = if k == 0 {
        Rational::one()
    } else {
        two - two / (Rational::one() + two * int(k) * int(n))
    };
    Ok(DimensionEstimate::exact(v, Method::Analytic))
}

/// Candidate value `2 - (1 + n/m)/(1 + 2nk)` for the `(m, n)` focus.
/// Carries [`Method::Conjecture`].
pub fn dim_conjecture_mn(m: u32, n: u32, k: u32) -> Result<DimensionEstimate, CatalogError> {
    require_odd("m", m)?;
    require_odd("n", n)?;
    if k == 0 {
        return Err(CatalogError::Domain("the candidate formula needs k >= 1".into()));
    }
    if m < n {
        return Err(CatalogError::Order { m, n });
    }
    let v = int(2) - (Rational::one() + int(n) / int(m)) / (Rational::one() + int(2) * int(n) * int(k));
    Ok(DimensionEstimate::exact(v, Method::Conjecture))
}

/// Power spiral `r = phi^-alpha`: `2 - 2 alpha/(alpha + 1)`.
pub fn dim_power_spiral(alpha: Rational) -> Result<DimensionEstimate, CatalogError> {
    if !(alpha > Rational::zero() && alpha < Rational::one()) {
        return Err(CatalogError::Domain(format!("need 0 < alpha < 1, got {alpha}")));
    }
    let v = int(2) - int(2) * alpha / (alpha + Rational::one());
    Ok(DimensionEstimate::exact(v, Method::Analytic))
}

/// Chirp `x^alpha sin(x^-beta)`: `2 - (alpha + 1)/(beta + 1)`.
pub fn dim_chirp(alpha: Rational, beta: Rational) -> Result<DimensionEstimate, CatalogError> {
    if !(alpha > Rational::zero() && alpha <= beta) {
        return Err(CatalogError::Domain(format!("need 0 < alpha <= beta, got {alpha}, {beta}")));
    }
    let v = int(2) - (alpha + Rational::one()) / (beta + Rational::one());
    Ok(DimensionEstimate::exact(v, Method::Analytic))
}

/// Elliptical spiral `(phi^-p0 cos phi, phi^-q0 sin phi)`:
/// `2 - (p0 + q0)/(1 + q0)`.
pub fn dim_elliptical(p0: Rational, q0: Rational) -> Result<DimensionEstimate, CatalogError> {
    let one = Rational::one();
    if !(p0 > Rational::zero() && p0 <= q0 && q0 <= one && p0 < one) {
        return Err(CatalogError::Domain(format!("need 0 < p0 <= q0 <= 1 and p0 < 1, got {p0}, {q0}")));
    }
    let v = int(2) - (p0 + q0) / (one + q0);
    Ok(DimensionEstimate::exact(v, Method::Analytic))
}

/// Exponents attached to a slow-fast system of codimension `n` at a contact
/// point of order `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlowFastDims {
    #[serde(serialize_with = "ser_ratio")]
    pub dim_orbit: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub updim_chirp: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub level_exp: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub gap_exp: Rational,
}

pub(crate) fn ser_ratio<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

pub fn dims_slowfast(n: u32, k: u32) -> Result<SlowFastDims, CatalogError> {
    if n == 0 || k < n {
        return Err(CatalogError::Domain(format!("need k >= n >= 1, got n = {n}, k = {k}")));
    }
    let (n, k) = (int(n), int(k));
    let one = Rational::one();
    let two = int(2);
    let gap_den = two * (k - n) + one;
    let den = two * k + one;
    Ok(SlowFastDims {
        dim_orbit: gap_den / den,
        updim_chirp: (int(4) * k - two * n + one) / den,
        level_exp: two * n / gap_den,
        gap_exp: den / gap_den,
    })
}
