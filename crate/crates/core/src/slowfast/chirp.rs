use std::collections::HashMap;
use std::io::Write;

use serde::Serialize;

use super::{OrbitSequence, SlowFastError};
use crate::boxcount::{fit_dimension, geometric_eps, CountSeries, GridOptions};
use crate::catalog::{DimensionEstimate, Rational};
use crate::spirals::Orientation;

/// One horizontal fast fibre `]alpha, omega[ x {level}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub alpha: f64,
    pub omega: f64,
    pub level: f64,
}

/// Union of the fast fibres through the orbit levels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Chirp {
    pub intervals: Vec<Interval>,
    #[serde(serialize_with = "crate::catalog::ser_ratio")]
    pub delta1: Rational,
    #[serde(serialize_with = "crate::catalog::ser_ratio")]
    pub delta2: Rational,
    n: u32,
    orientation: Orientation,
}

pub fn build_chirp(orbit: &OrbitSequence) -> Result<Chirp, SlowFastError> {
    let n = orbit.model.n();
    let k = orbit.model.codimension()?;
    let inv = 0.5 / n as f64;
    let intervals = orbit
        .levels
        .iter()
        .map(|&y| {
            let w = y.powf(inv);
            Interval {
                alpha: -w,
                omega: w,
                level: y,
            }
        })
        .collect();
    let (n, k) = (n as i64, k as i64);
    Ok(Chirp {
        intervals,
        delta1: Rational::new(1, 2 * n),
        delta2: Rational::new(2 * (k - n) + 1, 2 * n),
        n: n as u32,
        orientation: orbit.orientation,
    })
}

/// Cells of a grid with shift `s` meeting the open interval `]a, b[`.
fn columns(a: f64, b: f64, eps: f64, s: f64) -> (i64, i64) {
    ((a / eps + s).floor() as i64, (b / eps + s).ceil() as i64 - 1)
}

impl Chirp {
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Column range covered in each grid row. The intervals are nested, so
    /// a row is covered by its widest interval; rows below the last level
    /// are filled as the missing tail would fill them, using the half-width
    /// at the row's top edge.
    fn rows(&self, eps: f64, shift: [f64; 2]) -> HashMap<i64, (i64, i64)> {
        let inv = 0.5 / self.n as f64;
        let mut rows: HashMap<i64, (i64, i64)> = HashMap::new();
        for iv in &self.intervals {
            let j = (iv.level / eps + shift[1]).floor() as i64;
            rows.entry(j).or_insert_with(|| columns(iv.alpha, iv.omega, eps, shift[0]));
        }
        let last = self.intervals.last().map_or(0.0, |iv| iv.level);
        let (j0, j1) = ((shift[1]).floor() as i64, (last / eps + shift[1]).floor() as i64);
        for j in j0..j1 {
            let top = ((j + 1) as f64 - shift[1]) * eps;
            let w = top.min(last).max(0.0).powf(inv);
            rows.entry(j).or_insert_with(|| columns(-w, w, eps, shift[0]));
        }
        rows
    }

    /// Occupied cells of the chirp at box size `eps`.
    pub fn count(&self, eps: f64, shift: [f64; 2]) -> u64 {
        self.rows(eps, shift).values().map(|(a, b)| (b - a + 1).max(0) as u64).sum()
    }

    /// Occupied cells of the slow-fast spiral: the chirp plus the arc of the
    /// critical curve `y = x^2n` between the first two fibre ends.
    ///
    /// Each half of the arc is monotone, so it meets one cell more than the
    /// grid lines it crosses; the cells it shares with chirp rows are then
    /// subtracted row by row.
    pub fn count_with_curve(&self, eps: f64, shift: [f64; 2]) -> u64 {
        let rows = self.rows(eps, shift);
        let chirp: u64 = rows.values().map(|(a, b)| (b - a + 1).max(0) as u64).sum();
        if self.intervals.len() < 2 {
            return chirp;
        }
        let (a, b) = match self.orientation {
            Orientation::Unstable => (self.intervals[0].alpha, self.intervals[1].omega),
            Orientation::Stable => (self.intervals[1].alpha, self.intervals[0].omega),
        };
        let p = 2 * self.n as i32;
        let inv = 0.5 / self.n as f64;
        let (ya, yb) = (a.powi(p), b.powi(p));
        let col = |x: f64| (x / eps + shift[0]).floor() as i64;
        let row = |y: f64| (y / eps + shift[1]).floor() as i64;
        let arc = 1 + (col(0.0) - col(a)) + (row(ya) - row(0.0)) + (col(b) - col(0.0)) + (row(yb) - row(0.0));
        let mut shared = 0i64;
        for (&j, &(lo, hi)) in &rows {
            let band = ((j as f64 - shift[1]) * eps, (j as f64 + 1.0 - shift[1]) * eps);
            let y_lo = band.0.max(0.0);
            // columns of each half inside this row band
            let mut ranges = Vec::with_capacity(2);
            if y_lo <= yb && band.1 > 0.0 {
                let y_hi = band.1.min(yb);
                ranges.push((col(y_lo.powf(inv)), col(y_hi.powf(inv))));
            }
            if y_lo <= ya && band.1 > 0.0 {
                let y_hi = band.1.min(ya);
                ranges.push((col(-y_hi.powf(inv)), col(-y_lo.powf(inv))));
            }
            if ranges.len() == 2 && ranges[1].1 >= ranges[0].0 {
                ranges = vec![(ranges[1].0, ranges[0].1)];
            }
            shared += ranges
                .iter()
                .map(|&(c0, c1)| (c1.min(hi) - c0.max(lo) + 1).max(0))
                .sum::<i64>();
        }
        chirp + (arc - shared).max(0) as u64
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), SlowFastError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["l", "alpha", "omega", "level"])?;
        for (l, iv) in self.intervals.iter().enumerate() {
            w.write_record([
                l.to_string(),
                format!("{:.17e}", iv.alpha),
                format!("{:.17e}", iv.omega),
                format!("{:.17e}", iv.level),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn median_count(opts: &GridOptions, f: impl Fn([f64; 2]) -> u64) -> u64 {
    let mut counts: Vec<u64> = opts.shifts(2).iter().map(|s| f([s[0], s[1]])).collect();
    counts.sort_unstable();
    counts[counts.len() / 2]
}

fn fit<F>(orbit: &OrbitSequence, count: F) -> Result<DimensionEstimate, SlowFastError>
where
    F: Fn(f64) -> u64 + Sync,
{
    let window = orbit.fit_window()?;
    let series = CountSeries::from_counts(geometric_eps(window.0, window.1, 25), |eps| Ok(count(eps)))?;
    Ok(fit_dimension(&series, window)?)
}

/// Box dimension of the chirp built from `orbit`, by exact row-wise
/// counting of the intervals.
pub fn chirp_dimension(orbit: &OrbitSequence, opts: &GridOptions) -> Result<DimensionEstimate, SlowFastError> {
    let chirp = build_chirp(orbit)?;
    fit(orbit, |eps| median_count(opts, |s| chirp.count(eps, s)))
}

/// Box dimension of the whole slow-fast spiral, chirp plus critical arc.
pub fn spiral_dimension(orbit: &OrbitSequence, opts: &GridOptions) -> Result<DimensionEstimate, SlowFastError> {
    let chirp = build_chirp(orbit)?;
    fit(orbit, |eps| median_count(opts, |s| chirp.count_with_curve(eps, s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slowfast::{generate_orbit, LienardModel};
    use rustc_hash::FxHashSet;

    fn orbit(coeffs: &[(u32, f64)], count: usize) -> OrbitSequence {
        let m = LienardModel::new(1, coeffs.iter().copied(), 0.5).unwrap();
        generate_orbit(&m, 0.1, count).unwrap()
    }

    #[test]
    fn chirp_exponents() {
        let c = build_chirp(&orbit(&[(2, 1.0)], 20)).unwrap();
        assert_eq!((c.delta1, c.delta2), (Rational::new(1, 2), Rational::new(1, 2)));
        let c = build_chirp(&orbit(&[(4, 1.0)], 20)).unwrap();
        assert_eq!((c.delta1, c.delta2), (Rational::new(1, 2), Rational::new(3, 2)));
        let widths: Vec<f64> = c.intervals.iter().map(|iv| iv.omega - iv.alpha).collect();
        assert!(widths.windows(2).all(|w| w[1] < w[0]));
        assert!((widths[0] - 2.0 * 0.1f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn count_matches_brute_force() {
        let o = orbit(&[(2, 1.0)], 200);
        let c = build_chirp(&o).unwrap();
        let eps = 3e-4;
        let shift = [0.3, 0.6];
        // sample every interval finely and hash the cells; the tail block
        // below the last level is handled by `rows`, so compare above it
        let last = c.intervals.last().unwrap().level;
        let mut cells = FxHashSet::default();
        for iv in &c.intervals {
            let steps = ((iv.omega - iv.alpha) / (eps / 8.0)).ceil() as usize;
            let inner = (iv.omega - iv.alpha) * 1e-9;
            let ends = [iv.alpha + inner, iv.omega - inner];
            let grid = (1..steps).map(|i| iv.alpha + (iv.omega - iv.alpha) * i as f64 / steps as f64);
            for x in grid.chain(ends) {
                cells.insert(((x / eps + shift[0]).floor() as i64, (iv.level / eps + shift[1]).floor() as i64));
            }
        }
        let j_last = (last / eps + shift[1]).floor() as i64;
        let brute = cells.iter().filter(|c| c.1 >= j_last).count() as u64;
        let rows = c.rows(eps, shift);
        let exact: u64 = rows
            .iter()
            .filter(|(j, _)| **j >= j_last)
            .map(|(_, (a, b))| (b - a + 1) as u64)
            .sum();
        assert_eq!(brute, exact);
    }

    #[test]
    fn arc_count_matches_brute_force() {
        let o = orbit(&[(2, 1.0)], 300);
        let c = build_chirp(&o).unwrap();
        let (eps, shift) = (2e-3, [0.37, 0.81]);
        let rows = c.rows(eps, shift);
        let (a, b) = (c.intervals[0].alpha, c.intervals[1].omega);
        let mut extra = FxHashSet::default();
        let steps = 2_000_000;
        for i in 0..=steps {
            let x = a + (b - a) * i as f64 / steps as f64;
            let cell = ((x / eps + shift[0]).floor() as i64, (x * x / eps + shift[1]).floor() as i64);
            if !rows.get(&cell.1).is_some_and(|&(lo, hi)| lo <= cell.0 && cell.0 <= hi) {
                extra.insert(cell);
            }
        }
        assert_eq!(c.count_with_curve(eps, shift), c.count(eps, shift) + extra.len() as u64);
    }

    #[test]
    fn critical_arc_adds_few_cells() {
        let o = orbit(&[(2, 1.0)], 2000);
        let c = build_chirp(&o).unwrap();
        let eps = 1e-5;
        let (a, b) = (c.count(eps, [0.5, 0.5]), c.count_with_curve(eps, [0.5, 0.5]));
        assert!(b >= a && (b - a) as f64 <= 1.2 * 0.8 / eps, "{a} {b}");
    }
}
