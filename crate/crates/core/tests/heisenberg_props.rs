use std::f64::consts::PI;

use heisenberg_fractional::heisenberg::{
    convolve_with_measure, group_inv, group_mul, measure_density, measure_total_variation, symplectic_b, FnEvaluable,
    HeisenbergPoint, MeasureSpec,
};
use heisenberg_fractional::quad::QuadratureSpec;
use proptest::prelude::*;

fn point(n: usize) -> impl Strategy<Value = HeisenbergPoint> {
    (prop::collection::vec(-3.0f64..3.0, 2 * n), -3.0f64..3.0).prop_map(|(x, t)| HeisenbergPoint::new(x, t).unwrap())
}

fn triple() -> impl Strategy<Value = (HeisenbergPoint, HeisenbergPoint, HeisenbergPoint)> {
    (1usize..=3).prop_flat_map(|n| (point(n), point(n), point(n)))
}

fn max_gap(p: &HeisenbergPoint, q: &HeisenbergPoint) -> f64 {
    p.x.iter().zip(&q.x).map(|(a, b)| (a - b).abs()).fold((p.t - q.t).abs(), f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn group_law_is_associative((p, q, r) in triple()) {
        let left = group_mul(&group_mul(&p, &q).unwrap(), &r).unwrap();
        let right = group_mul(&p, &group_mul(&q, &r).unwrap()).unwrap();
        prop_assert!(max_gap(&left, &right) <= 1e-14 * 64.0, "{left:?} vs {right:?}");
    }

    #[test]
    fn inverse_and_antisymmetry((p, q, _r) in triple()) {
        let e = HeisenbergPoint::identity(p.n());
        prop_assert_eq!(group_mul(&p, &group_inv(&p)).unwrap(), e.clone());
        prop_assert_eq!(group_mul(&e, &p).unwrap(), p.clone());
        let b = symplectic_b(&p.x, &q.x).unwrap() + symplectic_b(&q.x, &p.x).unwrap();
        prop_assert!(b.abs() <= 1e-14);
        prop_assert_eq!(symplectic_b(&p.x, &p.x).unwrap(), 0.0);
    }

    #[test]
    fn dyadic_supports_are_disjoint(w in prop::collection::vec(-1.5f64..1.5, 2), gamma in 0.1f64..1.9) {
        let live = (1..=30)
            .filter(|&k| {
                let spec = MeasureSpec::dyadic_piece(gamma, vec![1.0], k).unwrap();
                measure_density(&spec, &w).unwrap().magnitude > 0.0
            })
            .count();
        prop_assert!(live <= 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    // n = 1: the pieces k >= 1 tile the unit disc, where the bump is 1
    #[test]
    fn dyadic_pieces_add_up(gamma in 0.2f64..1.8) {
        let quad = QuadratureSpec::new(1e-14, 4000, 0.0).unwrap().with_rel_tol(1e-12);
        let e = 2.0 - gamma;
        let mut sum: f64 = (1..=20)
            .map(|k| measure_total_variation(&MeasureSpec::dyadic_piece(gamma, vec![0.7], k).unwrap(), &quad).unwrap())
            .sum();
        sum += 2.0 * PI / e * 2f64.powf(-20.0 * e);
        let restricted = 2.0 * PI / e;
        prop_assert!((sum - restricted).abs() <= 1e-6 * restricted, "{sum} vs {restricted}");
    }

    #[test]
    fn young_bound_at_sampled_points(
        gamma in 0.2f64..1.8,
        a in -1.0f64..1.0,
        freq in 0.5f64..3.0,
        x in prop::collection::vec(-1.0f64..1.0, 2),
        t in -1.0f64..1.0,
    ) {
        let quad = QuadratureSpec::new(1e-9, 20_000, 0.0).unwrap().with_rel_tol(1e-7);
        let spec = MeasureSpec::product_fractional(gamma, vec![a]).unwrap();
        let f = FnEvaluable::new(move |x: &[f64], t: f64| (freq * (x[0] - 2.0 * x[1] + t)).cos());
        let at = HeisenbergPoint::new(x, t).unwrap();
        let v = convolve_with_measure(&f, &spec, &at, &quad).unwrap();
        let tv = measure_total_variation(&spec, &quad).unwrap();
        prop_assert!(v.value.abs() <= tv * (1.0 + 1e-6) + v.error, "{} > {tv}", v.value);
    }
}
