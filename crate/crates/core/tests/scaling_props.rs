use heisenberg_fractional::heisenberg::{group_inv, group_mul, symplectic_b, HeisenbergPoint};
use heisenberg_fractional::scaling::{dyadic_series_closed, dyadic_series_partial, SlopeFit, TestBoxFamily};
use proptest::prelude::*;

fn ball(n: usize, r: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 2 * n)
        .prop_filter("inside the unit ball", |v| v.iter().map(|c| c * c).sum::<f64>() <= 1.0)
        .prop_map(move |v| v.into_iter().map(|c| c * r).collect())
}

fn containment_case() -> impl Strategy<Value = (Vec<f64>, f64, Vec<f64>, Vec<f64>, f64)> {
    (1usize..=2, 0.005f64..0.49).prop_flat_map(|(n, delta)| {
        (
            prop::collection::vec(-2.0f64..2.0, n),
            Just(delta),
            ball(n, delta / 2.0),
            ball(n, delta / 2.0),
            -1.0f64..=1.0,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn shifted_points_land_in_the_box((a, delta, x, y, s) in containment_case()) {
        let fam = TestBoxFamily::new(a, delta).unwrap();
        let t = fam.phi(&x) + 2.0 * fam.m() * delta * delta * s;
        prop_assert!(fam.in_a(&x, t));
        let py = HeisenbergPoint::new(y.clone(), fam.phi(&y)).unwrap();
        let prod = group_mul(&HeisenbergPoint::new(x, t).unwrap(), &group_inv(&py)).unwrap();
        prop_assert!(fam.in_q(&prod.x, prod.t), "{prod:?}");
    }

    #[test]
    fn symplectic_estimate(n in 1usize..=3, seed in prop::collection::vec(-5.0f64..5.0, 12)) {
        let x = &seed[..2 * n];
        let y = &seed[6..6 + 2 * n];
        let norm = |v: &[f64]| v.iter().map(|c| c * c).sum::<f64>().sqrt();
        let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        let lhs = 0.5 * symplectic_b(x, y).unwrap().abs();
        prop_assert!(lhs <= n as f64 * norm(x) * norm(&diff) * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn slope_fit_recovers_lines(slope in -4.0f64..4.0, intercept in -10.0f64..10.0, len in 4usize..12) {
        let samples = (0..len).map(|i| {
            let x = -(i as f64) * std::f64::consts::LN_2;
            (x, slope * x + intercept)
        }).collect();
        let fit = SlopeFit::fit(samples).unwrap();
        prop_assert!((fit.slope - slope).abs() <= 1e-12 * (1.0 + slope.abs()) * 16.0);
        prop_assert!(fit.max_residual <= 1e-11);
    }

    #[test]
    fn dyadic_series_is_geometric(n in 1usize..=3, frac in 0.05f64..0.95, tau in 0.05f64..0.95) {
        let gamma = frac * 2.0 * n as f64;
        let closed = dyadic_series_closed(n, gamma, tau).unwrap();
        let e = (2.0 * n as f64 - gamma) * tau;
        let terms = ((60.0 / e).ceil() as u32).max(1);
        let partial = dyadic_series_partial(n, gamma, tau, terms);
        prop_assert!(closed.is_finite());
        prop_assert!((partial - closed).abs() <= 1e-12 * closed.max(1.0), "{partial} vs {closed}");
    }
}
