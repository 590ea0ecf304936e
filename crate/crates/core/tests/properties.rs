use kahler_lab::convex_core::{
    biconjugate, convexity_verdict, default_p_grid_size, legendre, mass, ConvexityKind, Potential,
    SGrid,
};
use kahler_lab::models::random_convex;
use kahler_lab::prekopa_bm::{
    bm_check, prekopa_check, random_polytope, slice_polytope, translation_detect, BoxGrid,
    ConvexBodyFamily, WeightFamily,
};
use proptest::prelude::*;

fn window() -> SGrid {
    SGrid::new(-14.0, 14.0, 513).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn legendre_reverses_order(a in 0u64..1000, b in 0u64..1000) {
        let g = window();
        let u = random_convex(g, 0.0, 2.0, a).unwrap();
        let w = random_convex(g, 0.0, 2.0, b).unwrap();
        let top: Vec<f64> = u.values().iter().zip(w.values()).map(|(x, y)| x.max(*y)).collect();
        let v = Potential::new(g, top, 0.0, 2.0).unwrap();
        let p = default_p_grid_size(g.len());
        let (lu, lv) = (legendre(&u, p).unwrap(), legendre(&v, p).unwrap());
        for (x, y) in lu.values().iter().zip(lv.values()) {
            prop_assert!(x + 1e-12 >= *y);
        }
    }

    #[test]
    fn biconjugate_returns_the_potential(seed in 0u64..1000) {
        let g = window();
        let u = random_convex(g, 0.0, 2.0, seed).unwrap();
        let d = biconjugate(&u).unwrap().sup_distance(&u);
        prop_assert!(d <= g.spacing() * g.spacing(), "{}", d);
    }

    #[test]
    fn verdict_is_a_cone(
        c1 in 0.0f64..3.0, c2 in 0.0f64..3.0, lam in 0.1f64..10.0,
        slope in -5.0f64..5.0, offset in -5.0f64..5.0,
    ) {
        let t: Vec<f64> = (0..21).map(|i| i as f64 / 20.0).collect();
        let f: Vec<f64> = t.iter().map(|x| c1 * x * x + (-x).exp()).collect();
        let g: Vec<f64> = t.iter().map(|x| c2 * (x - 0.3).powi(4)).collect();
        let h = 0.05;
        let sum: Vec<f64> = f.iter().zip(&g).map(|(a, b)| lam * a + b).collect();
        prop_assert!(!convexity_verdict(&sum, h, 1e-9).unwrap().is_nonconvex());
        let base = convexity_verdict(&f, h, 1e-9).unwrap();
        let moved: Vec<f64> = f.iter().zip(&t).map(|(a, x)| a + slope * x + offset).collect();
        prop_assert_eq!(convexity_verdict(&moved, h, 1e-9).unwrap().kind, base.kind);
        let line: Vec<f64> = t.iter().map(|x| slope * x + offset).collect();
        let v = convexity_verdict(&line, h, 1e-9).unwrap();
        prop_assert_eq!(v.kind, ConvexityKind::Affine);
        prop_assert!((v.slope.unwrap() - slope).abs() < 1e-9);
    }

    #[test]
    fn mass_scales_under_constants(seed in 0u64..1000, c in -3.0f64..3.0) {
        let u = random_convex(window(), 0.0, 2.0, seed).unwrap();
        let (m0, m1) = (mass(&u, None).unwrap(), mass(&u.shifted(c), None).unwrap());
        prop_assert!((m1 - (-c).exp() * m0).abs() <= 1e-12 * m1.max(m0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn jointly_convex_weights_give_convex_traces(
        a in 0.1f64..2.0, c in 0.5f64..2.0, r in -0.9f64..0.9, d in -1.0f64..1.0,
    ) {
        // phi = a t^2 + 2 b t x + c x^2 + d x with b^2 < a c.
        let b = r * (a * c).sqrt();
        let grid = BoxGrid::new(vec![-12.0], vec![12.0], vec![481]).unwrap();
        let t: Vec<f64> = (0..11).map(|i| -1.0 + 0.2 * i as f64).collect();
        let w = WeightFamily::from_fn(grid, t, |t, x| {
            a * t * t + 2.0 * b * t * x[0] + c * x[0] * x[0] + d * x[0]
        })
        .unwrap();
        prop_assert!(w.jointly_convex);
        prop_assert!(!prekopa_check(&w, 1e-8).unwrap().verdict.is_nonconvex());
    }

    #[test]
    fn polytope_slices_are_log_concave(seed in 0u64..10_000, n in 8usize..40) {
        let p = random_polytope(n, seed).unwrap();
        let (lo, hi) = p.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| {
            (l.min(v[2]), h.max(v[2]))
        });
        let t: Vec<f64> = (1..16).map(|i| lo + (hi - lo) * i as f64 / 16.0).collect();
        let fam = slice_polytope(&p, t).unwrap();
        prop_assert!(!bm_check(&fam, 1e-9).unwrap().is_nonconvex());
    }

    #[test]
    fn translates_are_detected(
        seed in 0u64..10_000, vx in -2.0f64..2.0, vy in -2.0f64..2.0, vz in -2.0f64..2.0,
    ) {
        let body = random_polytope(20, seed).unwrap();
        let t: Vec<f64> = (0..7).map(|i| i as f64 / 6.0).collect();
        let bodies = t
            .iter()
            .map(|&s| body.iter().map(|p| vec![p[0] + s * vx, p[1] + s * vy, p[2] + s * vz]).collect())
            .collect();
        let fam = ConvexBodyFamily::new(3, t, bodies).unwrap();
        let fit = translation_detect(&fam, 1e-9).unwrap();
        for (got, want) in fit.v.iter().zip([vx, vy, vz]) {
            prop_assert!((got - want).abs() < 1e-9);
        }
        prop_assert!(fit.residual < 1e-9);
    }
}
