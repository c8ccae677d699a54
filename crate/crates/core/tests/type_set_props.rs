use heisenberg_fractional::type_set::{
    classify_point, interpolation_theta, necessary_region, triangle_vertex, vertex_cgamma, vertex_d, vertex_dprime,
    Status, TypePoint, Variant,
};
use heisenberg_fractional::BigRational;
use num_bigint::BigInt;
use proptest::prelude::*;

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `n` with a rational `gamma` strictly inside `(0, 2n)`.
fn params() -> impl Strategy<Value = (u32, BigRational)> {
    (1u32..=4, 1i64..1000).prop_flat_map(|(n, q)| (Just(n), 1..(2 * n as i64 * q)).prop_map(move |(n, p)| (n, rat(p, q))))
}

fn unit_point() -> impl Strategy<Value = TypePoint<BigRational>> {
    (1i64..512).prop_flat_map(|d| (0..=d, 0..=d, Just(d)))
        .prop_map(|(a, b, d)| TypePoint::new(rat(a, d), rat(b, d)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn classification_respects_duality((n, gamma) in params(), pt in unit_point()) {
        let v = Variant::Fractional { n, gamma };
        prop_assert_eq!(classify_point(&v, &pt).unwrap(), classify_point(&v, &pt.dual()).unwrap());
    }

    #[test]
    fn radial_classification_respects_duality(n in 1u32..=4, m in 2u32..6, pt in unit_point()) {
        let v: Variant<BigRational> = Variant::Radial { n, m };
        prop_assert_eq!(classify_point(&v, &pt).unwrap(), classify_point(&v, &pt.dual()).unwrap());
    }

    #[test]
    fn float_duality(n in 1u32..=4, frac in 0.01f64..0.99, u in 0.0f64..=1.0, w in 0.0f64..=1.0) {
        // dyadic grid keeps 1 - x exact
        let snap = |x: f64| (x * 4096.0).round() / 4096.0;
        let pt = TypePoint::new(snap(u), snap(w)).unwrap();
        let v = Variant::Fractional { n, gamma: frac * 2.0 * n as f64 };
        prop_assert_eq!(classify_point(&v, &pt).unwrap(), classify_point(&v, &pt.dual()).unwrap());
    }

    #[test]
    fn theta_lands_on_d((n, gamma) in params()) {
        let theta = interpolation_theta(n, &gamma).unwrap();
        let c = triangle_vertex::<BigRational>(n);
        let one = rat(1, 1);
        let comb = |x: &BigRational| (&one - &theta) * x + &theta;
        let d = vertex_d(n, &gamma).unwrap();
        prop_assert_eq!(comb(&c.inv_p), d.inv_p);
        prop_assert_eq!(comb(&c.inv_q), d.inv_q);
    }

    #[test]
    fn c_gamma_strictly_inside_edge((n, gamma) in params()) {
        let d = vertex_d(n, &gamma).unwrap();
        let dp = vertex_dprime(n, &gamma).unwrap();
        let c = vertex_cgamma(n, &gamma).unwrap();
        // collinear, with parameter strictly between 0 and 1
        let (ex, ey) = (&d.inv_p - &dp.inv_p, &d.inv_q - &dp.inv_q);
        let (cx, cy) = (&c.inv_p - &dp.inv_p, &c.inv_q - &dp.inv_q);
        prop_assert_eq!(&ex * &cy, &ey * &cx);
        let s = &cx / &ex;
        prop_assert!(s > rat(0, 1) && s < rat(1, 1));
        prop_assert_eq!(classify_point(&Variant::Fractional { n, gamma: gamma.clone() }, &c).unwrap(), Status::ProvedIn);
        prop_assert_eq!(classify_point(&Variant::Fractional { n, gamma: gamma.clone() }, &d).unwrap(), Status::Unknown);
        prop_assert_eq!(classify_point(&Variant::Fractional { n, gamma }, &dp).unwrap(), Status::Unknown);
    }
}

#[test]
fn vanishing_gamma_recovers_triangle_corner() {
    for n in 1..=4 {
        let d = vertex_d(n, &1e-12).unwrap();
        let c = triangle_vertex::<f64>(n);
        assert!((d.inv_p - c.inv_p).abs() <= 1e-9 && (d.inv_q - c.inv_q).abs() <= 1e-9, "{d:?}");
    }
}

#[test]
fn grid_statuses_agree_with_halfplanes() {
    for (n, gamma) in [(1, 1.0), (1, 0.3), (2, 2.5), (3, 5.9)] {
        let report = necessary_region(n, &gamma).unwrap();
        let v = Variant::Fractional { n, gamma };
        for i in 0..200 {
            for j in 0..200 {
                let pt = TypePoint::new(i as f64 / 199.0, j as f64 / 199.0).unwrap();
                let worst = report.halfplanes.iter().map(|h| h.slack(&pt)).fold(f64::INFINITY, f64::min);
                match classify_point(&v, &pt).unwrap() {
                    Status::ProvedIn => assert!(worst >= -1e-11, "{pt:?} in but slack {worst}"),
                    Status::ProvedOut => assert!(worst < 0.0, "{pt:?} out but slack {worst}"),
                    Status::Unknown => {}
                }
            }
        }
    }
}
