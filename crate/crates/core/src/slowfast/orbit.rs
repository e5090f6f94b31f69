use std::io::Write;

use serde::Serialize;

use super::integrals::{slow_div_between, slow_div_difference, slow_div_integral, Side};
use super::{LienardModel, SlowFastError};
use crate::boxcount::{cover_1d, fit_dimension, geometric_eps, CountSeries};
use crate::catalog::DimensionEstimate;
use crate::numerics::{solve_monotone, NumericsError, Tolerance};
use crate::spirals::Orientation;

/// Levels `y_0 > y_1 > ...` of the entry-exit recursion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitSequence {
    pub model: LienardModel,
    pub levels: Vec<f64>,
    pub orientation: Orientation,
}

/// The next level below `y`, solving the recursion on the branch whose
/// fibre ends move.
fn next_level(model: &LienardModel, y: f64, side: Side, target: f64) -> Result<f64, SlowFastError> {
    let g = |z: f64| slow_div_between(model, z, y, side).map(|v| v - target);
    let n = model.n() as f64;
    let mut lo = y / 8.0;
    while g(lo)? <= 0.0 {
        lo /= 8.0;
        if lo < 1e-300 {
            return Err(SlowFastError::Numerics(NumericsError::BadBracket {
                lo,
                hi: y,
                g_lo: g(lo)?,
                g_hi: -target,
            }));
        }
    }
    // the residual is a difference of slow divergence integrals, so bound it
    // relative to their size, about 2n y
    let abs = 1e-14 * 2.0 * n * y;
    let tol = Tolerance::new(abs, 1e-16, 400).expect("valid tolerance");
    let mut failure = None;
    let z = solve_monotone(
        |z| match g(z) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        y,
        tol,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(z?)
}

/// `count` levels of the orbit through `y0`. The orientation follows the
/// sign of `J_- - J_+`: negative gives the unstable recursion
/// `J_-(y_{l+1}) = J_+(y_l)`, positive the stable one with the sides
/// swapped.
pub fn generate_orbit(model: &LienardModel, y0: f64, count: usize) -> Result<OrbitSequence, SlowFastError> {
    if count == 0 {
        return Err(SlowFastError::Domain("count must be at least 1".into()));
    }
    if !(y0 > 0.0) || y0 > model.max_level() {
        return Err(SlowFastError::OutsideDomain {
            y: y0,
            limit: model.max_level(),
        });
    }
    let d0 = slow_div_difference(model, y0)?;
    let orientation = if d0 < 0.0 {
        Orientation::Unstable
    } else if d0 > 0.0 {
        Orientation::Stable
    } else {
        return Err(SlowFastError::SignTest { y: y0 });
    };
    let side = match orientation {
        Orientation::Unstable => Side::Attracting,
        Orientation::Stable => Side::Repelling,
    };
    let mut levels = Vec::with_capacity(count);
    levels.push(y0);
    let mut y = y0;
    for l in 1..count {
        let d = slow_div_difference(model, y)?;
        if d == 0.0 || d.signum() != d0.signum() {
            return Err(SlowFastError::SignTest { y });
        }
        let z = next_level(model, y, side, d.abs()).map_err(|e| SlowFastError::BracketFailure {
            level: l,
            source: Box::new(e),
        })?;
        if !(z > 0.0 && z < y) {
            return Err(SlowFastError::BracketFailure {
                level: l,
                source: Box::new(SlowFastError::Domain(format!("level {z} does not decrease from {y}"))),
            });
        }
        levels.push(z);
        y = z;
    }
    Ok(OrbitSequence {
        model: model.clone(),
        levels,
        orientation,
    })
}

/// Least-squares slope and its standard error.
pub(crate) fn loglog_slope(points: impl Iterator<Item = (f64, f64)>) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = points.map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let rss: f64 = pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
    (slope, (rss / (n - 2.0).max(1.0) / sxx).sqrt())
}

/// Exponent fit of a power law in `l`, with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub stderr: f64,
    pub l_range: (usize, usize),
}

impl OrbitSequence {
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Relative mismatch of the recursion between levels `l` and `l + 1`,
    /// recomputed from the full slow divergence integrals.
    pub fn recursion_residual(&self, l: usize) -> Result<f64, SlowFastError> {
        let (y, z) = (self.levels[l], self.levels[l + 1]);
        let (a, b) = match self.orientation {
            Orientation::Unstable => (
                slow_div_integral(&self.model, z, Side::Attracting)?,
                slow_div_integral(&self.model, y, Side::Repelling)?,
            ),
            Orientation::Stable => (
                slow_div_integral(&self.model, y, Side::Attracting)?,
                slow_div_integral(&self.model, z, Side::Repelling)?,
            ),
        };
        Ok(((a - b) / b).abs())
    }

    fn range(&self, l_range: (usize, usize)) -> Result<(usize, usize), SlowFastError> {
        let (lo, hi) = (l_range.0.max(1), l_range.1.min(self.levels.len() - 2));
        if hi < lo + 3 {
            return Err(SlowFastError::Domain(format!("level range {l_range:?} is too short for this orbit")));
        }
        Ok((lo, hi))
    }

    /// Slope of `ln y_l` against `ln l`.
    pub fn level_exponent(&self, l_range: (usize, usize)) -> Result<ExponentFit, SlowFastError> {
        let (lo, hi) = self.range(l_range)?;
        let (slope, stderr) = loglog_slope((lo..=hi).map(|l| (l as f64, self.levels[l])));
        Ok(ExponentFit {
            slope,
            stderr,
            l_range: (lo, hi),
        })
    }

    /// Slope of `ln (y_l - y_{l+1})` against `ln l`.
    pub fn gap_exponent(&self, l_range: (usize, usize)) -> Result<ExponentFit, SlowFastError> {
        let (lo, hi) = self.range(l_range)?;
        let (slope, stderr) =
            loglog_slope((lo..=hi).map(|l| (l as f64, self.levels[l] - self.levels[l + 1])));
        Ok(ExponentFit {
            slope,
            stderr,
            l_range: (lo, hi),
        })
    }

    /// Box sizes between the gaps at `l = N/100` and `l = N/2`: the cover
    /// there is a run of isolated levels on top of a contiguous block, and
    /// the block reaches below the last computed level.
    pub(crate) fn fit_window(&self) -> Result<(f64, f64), SlowFastError> {
        let n = self.levels.len();
        if n < 500 {
            return Err(SlowFastError::Domain(format!("need at least 500 levels, have {n}")));
        }
        let gap = |l: usize| self.levels[l] - self.levels[l + 1];
        Ok((gap(n / 2), gap((n / 100).max(10))))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), SlowFastError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["l", "y"])?;
        for (l, y) in self.levels.iter().enumerate() {
            w.write_record([l.to_string(), format!("{y:.17e}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Box dimension of the orbit as a subset of the line, from the cover of
/// the computed levels plus the block of cells down to 0 that the missing
/// tail fills.
pub fn orbit_dimension(orbit: &OrbitSequence) -> Result<DimensionEstimate, SlowFastError> {
    let window = orbit.fit_window()?;
    let last = *orbit.levels.last().expect("orbit has levels");
    let series = CountSeries::from_counts(geometric_eps(window.0, window.1, 25), |eps| {
        let tail = ((last / eps).floor() as usize).saturating_sub(1);
        cover_1d(&orbit.levels, eps).map(|c| (c + tail) as u64)
    })?;
    Ok(fit_dimension(&series, window)?)
}
