use super::{BoxCountError, PointCloud};

fn dist<const D: usize>(a: &[f64; D], b: &[f64; D]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Walk `curve` from `t0` to `t1`, handing every accepted point to `visit` in
/// parameter order. Consecutive points are at most `max_gap` apart; a step is
/// accepted only when both halves are, so short excursions between two close
/// endpoints are not skipped. Returns the number of points visited.
pub fn walk_adaptive<const D: usize, C, V>(
    curve: C,
    t0: f64,
    t1: f64,
    max_gap: f64,
    max_points: usize,
    mut visit: V,
) -> Result<usize, BoxCountError>
where
    C: Fn(f64) -> [f64; D],
    V: FnMut(f64, &[f64; D]) -> Result<(), BoxCountError>,
{
    if !(max_gap > 0.0) || !(t1 >= t0) {
        return Err(BoxCountError::Domain(format!(
            "need max_gap > 0 and t0 <= t1, got {max_gap}, [{t0}, {t1}]"
        )));
    }
    let mut t = t0;
    let mut p = curve(t);
    visit(t, &p)?;
    let mut visited = 1usize;
    let mut h = ((t1 - t0) / 1024.0).max(f64::MIN_POSITIVE);
    while t < t1 {
        h = h.min(t1 - t);
        let tm = t + h / 2.0;
        let te = if h >= t1 - t { t1 } else { t + h };
        let pm = curve(tm);
        let pe = curve(te);
        let (a, b) = (dist(&p, &pm), dist(&pm, &pe));
        if a.max(b) > max_gap {
            h *= (0.9 * max_gap / a.max(b)).max(0.1);
            if h <= t.abs().max(1.0) * 4.0 * f64::EPSILON {
                return Err(BoxCountError::BudgetExceeded { t, budget: max_points });
            }
            continue;
        }
        visited += 2;
        if visited > max_points {
            return Err(BoxCountError::BudgetExceeded { t, budget: max_points });
        }
        visit(tm, &pm)?;
        visit(te, &pe)?;
        // aim the next halves at 90% of the allowed gap
        h *= (0.9 * max_gap / a.max(b).max(f64::MIN_POSITIVE)).min(2.0);
        t = te;
        p = pe;
    }
    Ok(visited)
}

/// Points of `curve` over `range`, consecutive samples at most
/// `target_eps / 4` apart.
pub fn sample_adaptive<const D: usize, C>(
    curve: C,
    range: (f64, f64),
    target_eps: f64,
    max_points: usize,
) -> Result<PointCloud, BoxCountError>
where
    C: Fn(f64) -> [f64; D],
{
    let mut coords = Vec::new();
    walk_adaptive(curve, range.0, range.1, target_eps / 4.0, max_points, |_, p| {
        coords.extend_from_slice(p);
        Ok(())
    })?;
    PointCloud::new(D, coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn max_gap(cloud: &PointCloud) -> f64 {
        let pts: Vec<&[f64]> = cloud.points().collect();
        pts.windows(2)
            .map(|w| w[0].iter().zip(w[1]).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    #[test]
    fn straight_segment_density() {
        let eps = 1e-3;
        let c = sample_adaptive(|t| [t, 2.0 * t], (0.0, 1.0), eps, 1 << 24).unwrap();
        let len = 5f64.sqrt();
        let ratio = c.len() as f64 / (4.0 * len / eps);
        assert!((1.0..2.1).contains(&ratio), "{ratio}");
        assert!(max_gap(&c) <= eps / 4.0 * (1.0 + 1e-12));
    }

    #[test]
    fn power_spiral_gaps() {
        // r = phi^(-1/2) down to r = eps
        let eps = 1e-3;
        let c = sample_adaptive(
            |phi: f64| {
                let r = phi.powf(-0.5);
                [r * phi.cos(), r * phi.sin()]
            },
            (1.0, 1.0 / (eps * eps)),
            eps,
            1 << 26,
        )
        .unwrap();
        let pts: Vec<&[f64]> = c.points().collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1_000_000 {
            let i = rng.gen_range(0..pts.len() - 1);
            let d = ((pts[i][0] - pts[i + 1][0]).powi(2) + (pts[i][1] - pts[i + 1][1]).powi(2)).sqrt();
            assert!(d <= eps / 4.0 * (1.0 + 1e-12));
        }
    }

    #[test]
    fn trajectory_3d_gaps() {
        let p = crate::spirals::Spiral3DParams::new(0.5, 1.0).unwrap();
        let eps = 1e-3;
        let c = sample_adaptive(|t| crate::spirals::param3d(t, &p), (1.0, 1e4), eps, 1 << 26).unwrap();
        assert_eq!(c.dim(), 3);
        assert!(max_gap(&c) <= eps / 4.0 * (1.0 + 1e-12));
    }

    #[test]
    fn budget_is_enforced() {
        let r = sample_adaptive(|t| [t, 0.0], (0.0, 1.0), 1e-6, 1000);
        assert!(matches!(r, Err(BoxCountError::BudgetExceeded { .. })));
    }
}
