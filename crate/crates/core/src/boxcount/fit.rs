use std::io::Write;

use rayon::prelude::*;

use super::BoxCountError;
use crate::catalog::{DimensionEstimate, Method};

/// Occupied-cell counts `N(eps)` for strictly decreasing `eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct CountSeries {
    entries: Vec<(f64, u64)>,
}

/// `count` box sizes spaced evenly in `log eps` from `hi` down to `lo`.
pub fn geometric_eps(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count <= 1 {
        return vec![hi];
    }
    let (a, b) = (hi.ln(), lo.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

impl CountSeries {
    pub fn new(entries: Vec<(f64, u64)>) -> Result<CountSeries, BoxCountError> {
        if entries.iter().any(|&(e, _)| !(e > 0.0 && e.is_finite())) {
            return Err(BoxCountError::Domain("box sizes must be positive".into()));
        }
        if entries.windows(2).any(|w| w[1].0 >= w[0].0) {
            return Err(BoxCountError::Domain("box sizes must be strictly decreasing".into()));
        }
        Ok(CountSeries { entries })
    }

    /// Evaluate `count` at every size in parallel.
    pub fn from_counts<F>(eps: Vec<f64>, count: F) -> Result<CountSeries, BoxCountError>
    where
        F: Fn(f64) -> Result<u64, BoxCountError> + Sync,
    {
        let entries = eps
            .into_par_iter()
            .map(|e| count(e).map(|n| (e, n)))
            .collect::<Result<Vec<_>, _>>()?;
        CountSeries::new(entries)
    }

    pub fn entries(&self) -> &[(f64, u64)] {
        &self.entries
    }

    /// True when counts never drop as `eps` shrinks. Randomised anchors can
    /// break this for closely spaced sizes.
    pub fn is_monotone(&self) -> bool {
        self.entries.windows(2).all(|w| w[1].1 >= w[0].1)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), BoxCountError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["eps", "count"])?;
        for (e, n) in &self.entries {
            w.write_record([format!("{e:.10e}"), n.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// The middle two decades of the series, or all of it when it spans less.
pub fn default_window(series: &CountSeries) -> (f64, f64) {
    let e = series.entries();
    if e.is_empty() {
        return (0.0, 0.0);
    }
    let (hi, lo) = (e[0].0, e[e.len() - 1].0);
    let span = (hi / lo).log10();
    if span <= 2.0 {
        return (lo, hi);
    }
    let mid = (hi.log10() + lo.log10()) / 2.0;
    (10f64.powf(mid - 1.0), 10f64.powf(mid + 1.0))
}

fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - icpt - slope * x).powi(2)).sum();
    let se = if xs.len() > 2 { (rss / (n - 2.0) / sxx).sqrt() } else { 0.0 };
    (slope, icpt, se)
}

/// Least-squares slope of `ln N` against `ln(1/eps)` over the sizes inside
/// `window`. The uncertainty is the larger of the slope's standard error and
/// half the slope difference between the two halves of the window, so it
/// grows when the log-log plot bends.
pub fn fit_dimension(series: &CountSeries, window: (f64, f64)) -> Result<DimensionEstimate, BoxCountError> {
    let (lo, hi) = (window.0.min(window.1), window.0.max(window.1));
    let tol = 1e-9;
    let pts: Vec<(f64, f64)> = series
        .entries()
        .iter()
        .filter(|(e, _)| *e >= lo * (1.0 - tol) && *e <= hi * (1.0 + tol))
        .map(|&(e, n)| (-(e.ln()), (n.max(1) as f64).ln()))
        .collect();
    const NEEDED: usize = 4;
    if pts.len() < NEEDED {
        return Err(BoxCountError::WindowTooNarrow {
            found: pts.len(),
            needed: NEEDED,
        });
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let (slope, _, se) = ols(&xs, &ys);
    let half = xs.len() / 2;
    let bend = if half >= 2 && xs.len() - half >= 2 {
        let a = ols(&xs[..half + 1], &ys[..half + 1]).0;
        let b = ols(&xs[half..], &ys[half..]).0;
        (a - b).abs() / 2.0
    } else {
        0.0
    };
    let used_lo = series.entries().iter().map(|e| e.0).filter(|e| *e >= lo * (1.0 - tol)).fold(f64::INFINITY, f64::min);
    let used_hi = series.entries().iter().map(|e| e.0).filter(|e| *e <= hi * (1.0 + tol)).fold(0.0, f64::max);
    Ok(DimensionEstimate::numeric(slope, Method::Grid, (used_lo, used_hi), Some(se.max(bend))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let eps = geometric_eps(1e-6, 1e-1, 11);
        let entries = eps.iter().map(|&e| (e, e.powf(-1.5).round() as u64)).collect();
        let s = CountSeries::new(entries).unwrap();
        let d = fit_dimension(&s, (1e-6, 1e-1)).unwrap();
        assert!((d.value - 1.5).abs() < 1e-3);
        let exact: Vec<(f64, u64)> = (0..8).map(|i| (2f64.powi(-i), 4u64.pow(i as u32))).collect();
        let d = fit_dimension(&CountSeries::new(exact).unwrap(), (1e-3, 1.0)).unwrap();
        assert!((d.value - 2.0).abs() < 1e-12);
        assert!(d.uncertainty.unwrap() < 1e-12);
    }

    #[test]
    fn narrow_window() {
        let s = CountSeries::new(vec![(1.0, 1), (0.5, 2), (0.25, 4)]).unwrap();
        assert!(matches!(fit_dimension(&s, (0.1, 1.0)), Err(BoxCountError::WindowTooNarrow { found: 3, .. })));
    }

    #[test]
    fn bent_series_reports_more_uncertainty() {
        let eps = geometric_eps(1e-4, 1e-1, 13);
        let straight = CountSeries::new(eps.iter().map(|&e| (e, (1e3 * e.powf(-1.2)) as u64)).collect()).unwrap();
        let bent = CountSeries::new(
            eps.iter()
                .map(|&e| (e, (1e3 * e.powf(-1.0 - 0.1 * (-e.log10()))) as u64))
                .collect(),
        )
        .unwrap();
        let a = fit_dimension(&straight, (1e-4, 1e-1)).unwrap().uncertainty.unwrap();
        let b = fit_dimension(&bent, (1e-4, 1e-1)).unwrap().uncertainty.unwrap();
        assert!(b > 10.0 * a, "{a} {b}");
    }

    #[test]
    fn window_defaults_to_middle_decades() {
        let s = CountSeries::new(geometric_eps(1e-6, 1e-1, 6).into_iter().map(|e| (e, 1)).collect()).unwrap();
        let (lo, hi) = default_window(&s);
        assert!((lo.log10() + 4.5).abs() < 1e-12 && (hi.log10() + 2.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_unordered_sizes() {
        assert!(CountSeries::new(vec![(0.1, 1), (0.2, 2)]).is_err());
    }
}
