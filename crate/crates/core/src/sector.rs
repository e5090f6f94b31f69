//! Box dimension of `(n, n)` spirals at extremely small `eps` by splitting
//! the plane into `L` angular sectors. Inside sector `j` the spiral is a
//! family of circular arcs with radii `r_w = K6 (w + K5)^-alpha`; arcs closer
//! than `2 eps` merge into a nucleus. All magnitudes are kept in [`LogReal`].

use std::f64::consts::{FRAC_PI_2, TAU};
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{dim_degenerate_nn, to_f64, CatalogError, DimensionEstimate, Method, Rational};
use crate::numerics::{Dd, LogReal, NumericsError, Precision};
use crate::spirals::{integral_k, periodic_part_p, trig_weight, FocusParams, Orientation, SpiralError};

#[derive(Debug, Error)]
pub enum SectorError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("eps = 1e{eps_log10:.3} exceeds the gap between the outermost arcs of sector {j}")]
    EpsilonTooLarge { j: u32, eps_log10: f64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Spiral(#[from] SpiralError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// How `K5` is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum K5Mode {
    /// `(phi_j + P2(phi_j) + C2) / 2 pi`
    Exact,
    /// `C2 / 2 pi`, valid when `C2` dwarfs the periodic terms
    Approximate,
}

/// Quantities shared by all sectors of one spiral.
#[derive(Debug, Clone, Copy)]
pub struct SectorScheme {
    n: u32,
    k: u32,
    l: u32,
    alpha: Rational,
    /// `C2 = C / K`
    c2: LogReal,
    /// `K2 = K^-alpha`
    k2: f64,
    mode: K5Mode,
    prec: Precision,
}

/// Constants of one sector.
#[derive(Debug, Clone, Copy)]
pub struct SectorSetup {
    pub j: u32,
    pub phi_j: f64,
    pub k5: LogReal,
    pub k6: LogReal,
    scheme: SectorScheme,
}

/// Result for one sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorResult {
    pub j: u32,
    pub k1: LogReal,
    pub area: LogReal,
    pub d_j: f64,
}

/// The three parts of the sector's `eps`-neighbourhood area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorArea {
    pub k1: LogReal,
    pub tail: LogReal,
    pub squares: LogReal,
    pub nucleus: LogReal,
    pub total: LogReal,
}

impl SectorScheme {
    /// Stable and unstable foci share dimensions: reversing time and swapping
    /// `x` and `y` maps one to the other, sending `phi0` to `pi/2 - phi0`.
    pub fn new(
        params: FocusParams,
        r0: f64,
        phi0: f64,
        l: u32,
        mode: K5Mode,
        prec: Precision,
    ) -> Result<SectorScheme, SectorError> {
        if !params.is_nn() {
            return Err(SectorError::Domain("the sector scheme covers the (n, n) focus only".into()));
        }
        let (n, k) = (params.n(), params.k());
        if k == 0 {
            return Err(SectorError::Domain(
                "the sector scheme needs k >= 1; for k = 0 the dimension is 1".into(),
            ));
        }
        if l == 0 {
            return Err(SectorError::Domain("need at least one sector".into()));
        }
        if !(r0 > 0.0 && r0.is_finite()) || !phi0.is_finite() {
            return Err(SectorError::Domain(format!("need r0 > 0 and finite phi0, got {r0}, {phi0}")));
        }
        let phi0 = match params.orientation() {
            Orientation::Stable => phi0,
            Orientation::Unstable => FRAC_PI_2 - phi0,
        };
        let kk = integral_k(n, k)?;
        let k_exact = 2.0 * k as f64;
        if (kk - k_exact).abs() > 1e-9 * k_exact {
            return Err(SectorError::Domain(format!("quadrature gives K = {kk}, expected {k_exact}")));
        }
        let alpha = Rational::new(1, 2 * (n * k) as i64);
        // C = r0^-2nk w(phi0)^-k - (K phi0 + P(phi0))
        let ln_z0 = Dd::from_f64(r0).ln().mul_f64(-2.0 * (n * k) as f64)
            - Dd::from_f64(trig_weight(phi0, n)).ln().mul_f64(k as f64);
        let linear0 = k_exact * phi0 + periodic_part_p(phi0, n, k);
        let c = LogReal::from_ln(ln_z0).try_sub(LogReal::from_f64(linear0), prec)?;
        if c.sign() <= 0 {
            return Err(SectorError::Domain("integration constant is not positive".into()));
        }
        Ok(SectorScheme {
            n,
            k,
            l,
            alpha,
            c2: c / LogReal::from_f64(k_exact),
            k2: k_exact.powf(-to_f64(alpha)),
            mode,
            prec,
        })
    }

    pub fn alpha(&self) -> Rational {
        self.alpha
    }

    pub fn sectors(&self) -> u32 {
        self.l
    }

    /// `C = K C2`.
    pub fn constant_c(&self) -> LogReal {
        self.c2 * LogReal::from_f64(2.0 * self.k as f64)
    }

    pub fn setup(&self, j: u32) -> Result<SectorSetup, SectorError> {
        if !(1..=self.l).contains(&j) {
            return Err(SectorError::Domain(format!("sector {j} outside 1..={}", self.l)));
        }
        let phi_j = TAU * j as f64 / self.l as f64;
        let kk = 2.0 * self.k as f64;
        let tau = LogReal::from_dd(Dd::TAU);
        let k5 = match self.mode {
            K5Mode::Approximate => self.c2 / tau,
            K5Mode::Exact => {
                let shift = phi_j + periodic_part_p(phi_j, self.n, self.k) / kk;
                self.c2.try_add(LogReal::from_f64(shift), self.prec)? / tau
            }
        };
        let a = to_f64(self.alpha);
        let ln_k6 = self.k2.ln() - trig_weight(phi_j, self.n).ln() / (2.0 * self.n as f64) - a * TAU.ln();
        Ok(SectorSetup {
            j,
            phi_j,
            k5,
            k6: LogReal::from_ln(Dd::from_f64(ln_k6)),
            scheme: *self,
        })
    }
}

/// Constants of sector `j` for the spiral through `(r0, phi0)`.
pub fn build_setup(
    params: FocusParams,
    r0: f64,
    phi0: f64,
    l: u32,
    j: u32,
    mode: K5Mode,
    prec: Precision,
) -> Result<SectorSetup, SectorError> {
    SectorScheme::new(params, r0, phi0, l, mode, prec)?.setup(j)
}

fn alpha_dd(setup: &SectorSetup) -> Dd {
    let a = setup.scheme.alpha;
    Dd::from_f64(*a.numer() as f64) / Dd::from_f64(*a.denom() as f64)
}

/// Radius `K6 (wave + K5)^-alpha` of the arc after `wave` further turns.
pub fn arc_radius(setup: &SectorSetup, wave: LogReal) -> Result<LogReal, SectorError> {
    if wave.sign() < 0 {
        return Err(SectorError::Domain("wave index must be nonnegative".into()));
    }
    let base = wave.try_add(setup.k5, setup.scheme.prec)?;
    Ok(setup.k6 * base.powf(-alpha_dd(setup))?)
}

/// First wave index whose gap to the next arc is at most `2 eps`, from the
/// first-order expansion `alpha K6 (beta + K5)^(-alpha-1) = 2 eps`.
pub fn critical_index(setup: &SectorSetup, eps: LogReal) -> Result<LogReal, SectorError> {
    if eps.sign() <= 0 {
        return Err(SectorError::Domain("eps must be positive".into()));
    }
    let a = alpha_dd(setup);
    let lead = LogReal::from_dd(a) * setup.k6 / (LogReal::from_f64(2.0) * eps);
    let root = lead.powf(Dd::ONE / (a + Dd::ONE))?;
    let too_large = || SectorError::EpsilonTooLarge {
        j: setup.j,
        eps_log10: eps.log10_abs().unwrap_or(f64::NAN),
    };
    if root <= setup.k5 {
        return Err(too_large());
    }
    let beta = root.try_sub(setup.k5, setup.scheme.prec)?;
    // the ceiling only matters while beta is an exact machine integer scale
    match beta.log10_abs() {
        Some(l10) if l10 < 53.0 * 2f64.log10() => Ok(LogReal::from_f64(beta.to_f64().ceil())),
        Some(_) => Ok(beta),
        None => Err(too_large()),
    }
}

/// `a - b` for `a >= b > 0`, dropping `b` when it is below `a` by more than
/// 60 decades.
fn guarded_difference(a: LogReal, b: LogReal, prec: Precision) -> Result<LogReal, SectorError> {
    let gap = (a.ln_or_neg_inf() - b.ln_or_neg_inf()).to_f64();
    if gap > 60.0 * std::f64::consts::LN_10 {
        return Ok(a);
    }
    Ok(a.try_sub(b, prec)?)
}

/// Area of the `eps`-neighbourhood of the spiral inside the sector: arcs up
/// to the critical index, the squares at their ends, and the nucleus disk
/// sector. When `eps` exceeds every gap the nucleus alone remains.
pub fn sector_area(setup: &SectorSetup, eps: LogReal) -> Result<SectorArea, SectorError> {
    let prec = setup.scheme.prec;
    let k1 = match critical_index(setup, eps) {
        Ok(k1) => k1,
        Err(SectorError::EpsilonTooLarge { .. }) => LogReal::ZERO,
        Err(e) => return Err(e),
    };
    let a = alpha_dd(setup);
    let one_minus_a = Dd::ONE - a;
    let wedge = LogReal::from_dd(Dd::PI) / LogReal::from_f64(setup.scheme.l as f64);
    let k1_plus_1 = k1.try_add(LogReal::ONE, prec)?;
    let outer = k1_plus_1.try_add(setup.k5, prec)?.powf(one_minus_a)?;
    let inner = setup.k5.powf(one_minus_a)?;
    let arc_sum = setup.k6 * guarded_difference(outer, inner, prec)? / LogReal::from_dd(one_minus_a);
    let tail = arc_sum * LogReal::from_f64(4.0) * wedge * eps;
    let squares = k1_plus_1 * eps * eps;
    let r_k1 = arc_radius(setup, k1)?;
    let nucleus = r_k1 * r_k1 * wedge;
    let total = tail.try_add(squares, prec)?.try_add(nucleus, prec)?;
    Ok(SectorArea {
        k1,
        tail,
        squares,
        nucleus,
        total,
    })
}

/// `D_j = 2 - ln(area) / ln(eps0)`.
pub fn sector_dimension(setup: &SectorSetup, eps0: LogReal) -> Result<f64, SectorError> {
    Ok(sector_result(setup, eps0)?.d_j)
}

fn sector_result(setup: &SectorSetup, eps0: LogReal) -> Result<SectorResult, SectorError> {
    let area = sector_area(setup, eps0)?;
    let ratio = area.total.ln_or_neg_inf() / eps0.ln_or_neg_inf();
    Ok(SectorResult {
        j: setup.j,
        k1: area.k1,
        area: area.total,
        d_j: 2.0 - ratio.to_f64(),
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SectorRow {
    pub j: u32,
    #[serde(rename = "D_j")]
    pub d_j: f64,
}

/// Full run over all sectors.
#[derive(Debug, Clone, Serialize)]
pub struct SectorReport {
    pub params: FocusParams,
    pub r0: f64,
    pub phi0: f64,
    #[serde(rename = "L")]
    pub l: u32,
    pub eps0_log10: f64,
    pub k5_mode: K5Mode,
    pub per_sector: Vec<SectorRow>,
    #[serde(rename = "max_D")]
    pub max_d: f64,
    #[serde(rename = "analytic_D")]
    pub analytic_d: f64,
    pub conjecture: bool,
}

impl SectorReport {
    pub fn estimate(&self) -> DimensionEstimate {
        let eps = 10f64.powf(self.eps0_log10);
        DimensionEstimate::numeric(self.max_d, Method::Sector, (eps, eps), None)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), SectorError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["j", "D_j"])?;
        for row in &self.per_sector {
            w.write_record([row.j.to_string(), format!("{:.12}", row.d_j)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Largest sector dimension over `j = 1..=L`, sectors evaluated in parallel.
pub fn estimate_dimension(
    params: FocusParams,
    r0: f64,
    phi0: f64,
    l: u32,
    eps0: LogReal,
    mode: K5Mode,
    prec: Precision,
) -> Result<SectorReport, SectorError> {
    let scheme = SectorScheme::new(params, r0, phi0, l, mode, prec)?;
    let per_sector = (1..=l)
        .into_par_iter()
        .map(|j| {
            let setup = scheme.setup(j)?;
            let res = sector_result(&setup, eps0)?;
            Ok(SectorRow { j, d_j: res.d_j })
        })
        .collect::<Result<Vec<_>, SectorError>>()?;
    let max_d = per_sector.iter().map(|r| r.d_j).fold(f64::NEG_INFINITY, f64::max);
    let analytic = dim_degenerate_nn(params.n(), params.k())?;
    Ok(SectorReport {
        params,
        r0,
        phi0,
        l,
        eps0_log10: eps0.log10_abs().unwrap_or(f64::NAN),
        k5_mode: mode,
        per_sector,
        max_d,
        analytic_d: analytic.value,
        conjecture: false,
    })
}

/// `L = 1000`, `eps0 = 1e-10000`, `r0 = 1/10`, `phi0 = 0`.
pub const DEFAULT_SECTORS: u32 = 1000;
pub const DEFAULT_EPS_LOG10: f64 = -10000.0;
pub const DEFAULT_R0: f64 = 0.1;
