use std::f64::consts::TAU;

use approx::assert_relative_eq;
use proptest::prelude::*;

use spiraldim::boxcount::{count_boxes, PointCloud};
use spiraldim::catalog::{
    dim_chirp, dim_conjecture_mn, dim_degenerate_nn, dim_elliptical, dim_power_spiral, dims_slowfast, parse_rational,
    Rational,
};
use spiraldim::slowfast::{generate_orbit, slow_div_difference, slow_div_integral, LienardModel, Side};
use spiraldim::spirals::{
    eval_spiral_mn, eval_spiral_nn, gen_trig, FocusParams, Orientation, SpiralModel,
};

fn odd() -> impl Strategy<Value = u32> {
    (0u32..6).prop_map(|i| 2 * i + 1)
}

fn cloud(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, dim..dim * 300).prop_map(move |mut v| {
        v.truncate(v.len() / dim * dim);
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn halving_the_box_never_lowers_the_count(coords in cloud(2), e in 0.01f64..0.5) {
        let c = PointCloud::new(2, coords).unwrap();
        prop_assert!(count_boxes(&c, e / 2.0).unwrap() >= count_boxes(&c, e).unwrap());
    }

    #[test]
    fn counts_are_scale_covariant(coords in cloud(3), e in 0.01f64..0.5, p in -6i32..6) {
        let s = 2f64.powi(p);
        let a = PointCloud::new(3, coords.clone()).unwrap();
        let b = PointCloud::new(3, coords.iter().map(|v| v * s).collect()).unwrap();
        prop_assert_eq!(count_boxes(&a, e).unwrap(), count_boxes(&b, e * s).unwrap());
    }

    #[test]
    fn count_is_bounded_by_points_and_volume(coords in cloud(2), e in 0.01f64..0.5) {
        let c = PointCloud::new(2, coords).unwrap();
        let n = count_boxes(&c, e).unwrap();
        let side = (2.0 / e).ceil() + 1.0;
        prop_assert!(n >= 1 && n <= c.len() && n as f64 <= side * side);
    }

    #[test]
    fn catalog_values_lie_between_one_and_two(n in odd(), m in odd(), k in 1u32..20) {
        let d = dim_degenerate_nn(n, k).unwrap().value;
        prop_assert!((1.0..2.0).contains(&d));
        prop_assert!(dim_degenerate_nn(n, k + 1).unwrap().value > d);
        let (m, n) = (m.max(n), m.min(n));
        let c = dim_conjecture_mn(m, n, k).unwrap().value;
        prop_assert!((1.0..2.0).contains(&c));
        if m == n {
            prop_assert_eq!(c, d);
        }
    }

    #[test]
    fn power_chirp_elliptical_ranges(a in 1i64..50, b in 1i64..50, q in 1i64..50) {
        let (a, b) = (a.min(b), a.max(b));
        let alpha = Rational::new(a, 51);
        let beta = Rational::new(b, 51);
        let d = dim_power_spiral(alpha).unwrap().value;
        prop_assert!(d > 1.0 && d < 2.0);
        let c = dim_chirp(alpha, beta).unwrap().value;
        prop_assert!((1.0..2.0).contains(&c));
        let q0 = Rational::new(q.max(a), 50);
        let e = dim_elliptical(alpha, q0).unwrap().value;
        prop_assert!((1.0..2.0).contains(&e));
    }

    #[test]
    fn slowfast_exponents_are_consistent(n in 1u32..6, extra in 0u32..6) {
        let k = n + extra;
        let d = dims_slowfast(n, k).unwrap();
        prop_assert!(d.dim_orbit > Rational::new(0, 1) && d.dim_orbit < Rational::new(1, 1));
        prop_assert!(d.updim_chirp >= Rational::new(1, 1) && d.updim_chirp < Rational::new(2, 1));
        // levels ~ l^-a have dimension 1/(1 + a)
        prop_assert_eq!(d.dim_orbit, d.gap_exp.recip());
        prop_assert_eq!(d.gap_exp - d.level_exp, Rational::new(1, 1));
    }

    #[test]
    fn decimals_parse_exactly(num in -99_999i64..99_999, places in 1u32..6) {
        let den = 10i64.pow(places);
        let text = format!("{}{}.{:0width$}", if num < 0 { "-" } else { "" }, num.abs() / den, num.abs() % den, width = places as usize);
        prop_assert_eq!(parse_rational(&text).unwrap(), Rational::new(num, den));
    }

    #[test]
    fn closed_form_passes_through_its_start(n in odd(), k in 0u32..5, r0 in 0.05f64..1.0, phi0 in -10.0f64..10.0, stable in any::<bool>()) {
        let o = if stable { Orientation::Stable } else { Orientation::Unstable };
        let model = SpiralModel::nn(FocusParams::nn(n, k, o).unwrap(), r0, phi0).unwrap();
        assert_relative_eq!(eval_spiral_nn(phi0, &model).unwrap(), r0, max_relative = 1e-10);
    }

    #[test]
    fn stable_spirals_shrink_every_turn(n in odd(), k in 0u32..5, r0 in 0.3f64..1.0, phi in 0.0f64..TAU) {
        let model = SpiralModel::nn(FocusParams::nn(n, k, Orientation::Stable).unwrap(), r0, 0.0).unwrap();
        let mut prev = eval_spiral_nn(phi, &model).unwrap();
        for turn in 1..20 {
            let r = eval_spiral_nn(phi + turn as f64 * TAU, &model).unwrap();
            // the angle itself is rounded, so allow one part in 1e12
            prop_assert!(r <= prev * (1.0 + 1e-12));
            prev = r;
        }
    }

    #[test]
    fn mn_power_law_window(m in odd(), n in odd(), k in 1u32..3, r0 in 0.3f64..1.0) {
        let (m, n) = (m.max(n).min(5), m.min(n).min(3));
        let model = SpiralModel::mn(FocusParams::new(m, n, k, Orientation::Stable).unwrap(), r0, 0.0).unwrap();
        let e = 1.0 / (2 * m * n * k) as f64;
        let v: Vec<f64> = (0..400)
            .map(|i| {
                let phi = TAU + i as f64 * 198.0 * std::f64::consts::PI / 400.0;
                eval_spiral_mn(phi, &model).unwrap() * phi.powf(e)
            })
            .collect();
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(0.0, f64::max);
        prop_assert!(lo > 0.0 && hi / lo < 3.0, "{} {}", lo, hi);
    }

    #[test]
    fn generalized_trig_energy(m in 1u32..6, n in 1u32..6, phi in -50.0f64..50.0) {
        let (c, s) = gen_trig(phi, m, n).unwrap();
        prop_assert!((c.powi(2 * m as i32) + s.powi(2 * n as i32) - 1.0).abs() < 1e-10);
    }
}

fn lienard() -> impl Strategy<Value = LienardModel> {
    // one nonzero even term of degree 2 or 4 plus an odd perturbation
    (prop::sample::select(vec![2u32, 4]), 0.2f64..2.0, any::<bool>(), -0.5f64..0.5).prop_map(|(deg, c, neg, odd)| {
        let c = if neg { -c } else { c };
        LienardModel::new(1, [(deg, c), (3, odd)], 0.3).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn slow_divergence_signs(model in lienard(), t in 0.01f64..1.0) {
        let y = t * model.max_level();
        prop_assert!(slow_div_integral(&model, y, Side::Attracting).unwrap() < 0.0);
        let k = model.codimension().unwrap();
        let lead = model.coeff(2 * k);
        let diff = slow_div_difference(&model, y).unwrap();
        prop_assert!(diff != 0.0 && diff.signum() == -lead.signum());
    }

    #[test]
    fn orbits_decrease_and_solve_the_recursion(model in lienard()) {
        let orbit = generate_orbit(&model, 0.5 * model.max_level(), 60).unwrap();
        prop_assert!(orbit.levels().windows(2).all(|w| w[1] < w[0] && w[1] > 0.0));
        for l in [0, 10, 58] {
            prop_assert!(orbit.recursion_residual(l).unwrap() <= 1e-10);
        }
    }
}
