use super::cells::median;
use super::walk::walk_adaptive;
use super::{BoxCountError, CellGrid, CountSeries, GridOptions};

/// Walk budget per box size.
const MAX_WALK_POINTS: usize = 400_000_000;

/// Samples per turn when comparing neighbouring turns.
const MERGE_SAMPLES: usize = 32;

/// A region known to contain the rest of a curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Nucleus {
    /// `(|x|/ax)^px + (|y|/ay)^py <= 1`
    QuasiDisk { ax: f64, ay: f64, px: f64, py: f64 },
    /// `0 <= x <= x_max`, `|y| <= amp x^alpha`, with the axes swapped when
    /// `transpose` is set.
    Envelope {
        x_max: f64,
        alpha: f64,
        amp: f64,
        transpose: bool,
    },
}

impl Nucleus {
    fn bounds(&self) -> ([f64; 2], [f64; 2]) {
        match *self {
            Nucleus::QuasiDisk { ax, ay, .. } => ([-ax, -ay], [ax, ay]),
            Nucleus::Envelope {
                x_max,
                alpha,
                amp,
                transpose,
            } => {
                let h = amp * x_max.powf(alpha);
                if transpose {
                    ([-h, 0.0], [h, x_max])
                } else {
                    ([0.0, -h], [x_max, h])
                }
            }
        }
    }

    /// Whether the closed box `[lo, hi]` meets the region.
    pub fn meets_box(&self, lo: [f64; 2], hi: [f64; 2]) -> bool {
        // distance from 0 to an interval
        let gap = |a: f64, b: f64| if a > 0.0 { a } else if b < 0.0 { -b } else { 0.0 };
        match *self {
            Nucleus::QuasiDisk { ax, ay, px, py } => {
                (gap(lo[0], hi[0]) / ax).powf(px) + (gap(lo[1], hi[1]) / ay).powf(py) <= 1.0
            }
            Nucleus::Envelope {
                x_max,
                alpha,
                amp,
                transpose,
            } => {
                let (a, b) = if transpose { (1, 0) } else { (0, 1) };
                if hi[a] < 0.0 || lo[a] > x_max {
                    return false;
                }
                amp * hi[a].min(x_max).powf(alpha) >= gap(lo[b], hi[b])
            }
        }
    }
}

/// A planar curve that winds or oscillates into a point, with enough
/// structure to replace its innermost part by a filled region.
pub trait PlanarCurve: Sync {
    fn point(&self, t: f64) -> [f64; 2];
    fn start(&self) -> f64;
    /// Parameter one turn (or one oscillation) after `t`.
    fn next_turn(&self, t: f64) -> f64;
    /// Region containing the curve for parameters `>= t`.
    fn core(&self, t: f64) -> Nucleus;
    /// Largest parameter the curve may be evaluated at.
    fn max_param(&self) -> f64;
}

fn turn_gap<C: PlanarCurve + ?Sized>(curve: &C, t: f64) -> f64 {
    let t1 = curve.next_turn(t);
    (0..MERGE_SAMPLES)
        .map(|i| {
            let u = t + (t1 - t) * i as f64 / MERGE_SAMPLES as f64;
            let (p, q) = (curve.point(u), curve.point(curve.next_turn(u)));
            (p[0] - q[0]).hypot(p[1] - q[1])
        })
        .fold(0.0, f64::max)
}

/// A parameter after which neighbouring turns are closer than `eps / 4`, so
/// the remaining curve meets every `eps`-cell of its core region.
pub fn turn_merge_parameter<C: PlanarCurve + ?Sized>(curve: &C, eps: f64) -> Result<f64, BoxCountError> {
    let target = eps / 4.0;
    let mut lo = curve.start();
    if turn_gap(curve, lo) < target {
        return Ok(lo);
    }
    let mut hi = curve.next_turn(lo);
    while turn_gap(curve, hi) >= target {
        lo = hi;
        hi = lo + 2.0 * (hi - curve.start());
        if hi > curve.max_param() {
            return Err(BoxCountError::Domain(format!(
                "turns stay {target:e} apart up to the last parameter {}",
                curve.max_param()
            )));
        }
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if turn_gap(curve, mid) < target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn cover_one<C: PlanarCurve + ?Sized>(curve: &C, eps: f64, opts: &GridOptions) -> Result<u64, BoxCountError> {
    let t_merge = turn_merge_parameter(curve, eps)?;
    let t_end = curve.next_turn(t_merge).min(curve.max_param());
    let mut grids = opts
        .shifts(2)
        .iter()
        .map(|s| CellGrid::new(&[0.0, 0.0], s, eps, opts.budget))
        .collect::<Result<Vec<_>, _>>()?;
    walk_adaptive(
        |t| curve.point(t),
        curve.start(),
        t_end,
        eps / 4.0,
        MAX_WALK_POINTS,
        |_, p| grids.iter_mut().try_for_each(|g| g.insert(p)),
    )?;
    let core = curve.core(t_merge);
    let (lo, hi) = core.bounds();
    let mut counts = Vec::with_capacity(grids.len());
    for g in &mut grids {
        let i0 = g.index_of(&lo);
        let i1 = g.index_of(&hi);
        for i in i0[0]..=i1[0] {
            for j in i0[1]..=i1[1] {
                let c = g.cell_corner(&[i, j]);
                if core.meets_box([c[0], c[1]], [c[0] + eps, c[1] + eps]) {
                    g.insert_index(&[i, j])?;
                }
            }
        }
        counts.push(g.len());
    }
    Ok(median(counts) as u64)
}

/// Occupied-cell counts of a curve at each box size, median over shifted
/// grids. The curve is walked until its turns merge at the scale of the box
/// size; the remaining core region is filled cell by cell.
pub fn cover_counts<C: PlanarCurve + ?Sized>(
    curve: &C,
    eps: Vec<f64>,
    opts: &GridOptions,
) -> Result<CountSeries, BoxCountError> {
    CountSeries::from_counts(eps, |e| cover_one(curve, e, opts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quasi_disk_box_test() {
        let d = Nucleus::QuasiDisk {
            ax: 1.0,
            ay: 1.0,
            px: 2.0,
            py: 2.0,
        };
        assert!(d.meets_box([0.7, 0.7], [0.8, 0.8]));
        assert!(!d.meets_box([0.71, 0.71], [0.8, 0.8]));
        assert!(d.meets_box([-0.1, 0.99], [0.1, 2.0]));
        assert!(!d.meets_box([1.01, -0.1], [2.0, 0.1]));
    }

    #[test]
    fn envelope_box_test() {
        let e = Nucleus::Envelope {
            x_max: 1.0,
            alpha: 0.5,
            amp: 1.0,
            transpose: false,
        };
        assert!(e.meets_box([0.2, 0.4], [0.25, 0.5]));
        assert!(!e.meets_box([0.1, 0.4], [0.15, 0.5]));
        assert!(!e.meets_box([1.1, 0.0], [1.2, 0.1]));
        let t = Nucleus::Envelope {
            x_max: 1.0,
            alpha: 0.5,
            amp: 1.0,
            transpose: true,
        };
        assert!(t.meets_box([0.4, 0.2], [0.5, 0.25]));
        assert!(!t.meets_box([0.4, 0.1], [0.5, 0.15]));
    }

    /// Concentric circles, radius `1/(j+1)` on turn `j`: a stand-in
    /// with an exact merge point.
    struct Rings;

    impl PlanarCurve for Rings {
        fn point(&self, t: f64) -> [f64; 2] {
            let r = 1.0 / (1.0 + (t / std::f64::consts::TAU).floor());
            [r * t.cos(), r * t.sin()]
        }
        fn start(&self) -> f64 {
            0.0
        }
        fn next_turn(&self, t: f64) -> f64 {
            t + std::f64::consts::TAU
        }
        fn core(&self, t: f64) -> Nucleus {
            let r = 1.0 / (1.0 + (t / std::f64::consts::TAU).floor());
            Nucleus::QuasiDisk {
                ax: r,
                ay: r,
                px: 2.0,
                py: 2.0,
            }
        }
        fn max_param(&self) -> f64 {
            1e9
        }
    }

    #[test]
    fn merge_parameter_of_rings() {
        // ring j has radius 1/(j+1); neighbours differ by about 1/j^2
        let t = turn_merge_parameter(&Rings, 1e-4).unwrap();
        let j = (t / std::f64::consts::TAU).floor();
        let gap = 1.0 / (j + 1.0) - 1.0 / (j + 2.0);
        assert!((gap / 2.5e-5 - 1.0).abs() < 0.03, "{j} {gap}");
    }

    #[test]
    fn filled_core_matches_disk_area() {
        let core = Rings.core(0.0);
        let eps = 1e-2;
        let g = CellGrid::new(&[0.0, 0.0], &[0.5, 0.5], eps, Default::default()).unwrap();
        let (lo, hi) = core.bounds();
        let (i0, i1) = (g.index_of(&lo), g.index_of(&hi));
        let mut n = 0;
        for i in i0[0]..=i1[0] {
            for j in i0[1]..=i1[1] {
                let c = g.cell_corner(&[i, j]);
                n += core.meets_box([c[0], c[1]], [c[0] + eps, c[1] + eps]) as usize;
            }
        }
        let est = std::f64::consts::PI / (eps * eps) + 8.0 / eps;
        assert!((n as f64 / est - 1.0).abs() < 0.02, "{n} {est}");
    }
}
