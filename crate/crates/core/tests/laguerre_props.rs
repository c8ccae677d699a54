use heisenberg_fractional::laguerre_transform::{
    fkbeta_hat_closed, fkbeta_hat_quadrature, fkbeta_hat_sup_bound, binomial_log_target, lemma7_sum, w_of_xi,
    TransformQuery,
};
use heisenberg_fractional::quad::QuadratureSpec;
use heisenberg_fractional::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_matches_quadrature(
        n in 1u32..=3,
        k in 0u32..=15,
        re in -0.9f64..2.5,
        im in -1.0f64..1.0,
        xi in -40.0f64..40.0,
    ) {
        let beta = Complex64::new(re, im);
        let q = TransformQuery::new(n, k, beta, xi).unwrap();
        let closed = fkbeta_hat_closed(&q).unwrap();
        let numeric = fkbeta_hat_quadrature(&q, &QuadratureSpec::default()).unwrap().value;
        let floor = 1e-6 * fkbeta_hat_sup_bound(n, k, beta).unwrap().value;
        let rel = (closed - numeric).norm() / numeric.norm().max(floor);
        prop_assert!(rel <= 1e-8, "{closed} vs {numeric}: {rel:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn w_is_unimodular(xi in -1e6f64..1e6) {
        prop_assert!((w_of_xi(xi).norm() - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn binomial_sum_ignores_re_beta(n in 1u32..=4, k in 0u32..=200, b1 in -0.95f64..3.0, b2 in -0.95f64..3.0) {
        let s1 = lemma7_sum(n, k, b1).unwrap();
        let s2 = lemma7_sum(n, k, b2).unwrap();
        prop_assert!((s1 - s2).abs() <= 1e-10 * s1.abs());
        prop_assert!((s1.ln() - binomial_log_target(n, k)).abs() <= 1e-11);
    }

    #[test]
    fn transform_sits_under_envelope(
        n in 1u32..=3,
        k in 0u32..=15,
        re in -0.9f64..2.5,
        im in -1.0f64..1.0,
        xi in -60.0f64..60.0,
    ) {
        let beta = Complex64::new(re, im);
        let bound = fkbeta_hat_sup_bound(n, k, beta).unwrap();
        let v = fkbeta_hat_closed(&TransformQuery::new(n, k, beta, xi).unwrap()).unwrap().norm();
        prop_assert!(v <= bound.envelope(beta, xi) * (1.0 + 1e-9) + 1e-300);
        prop_assert!(v <= bound.value * (1.0 + 1e-9));
    }

    #[test]
    fn envelope_decays_past_five(re in -0.9f64..2.5, im in -1.0f64..1.0, xi in 5.0f64..200.0, step in 0.0f64..50.0) {
        let beta = Complex64::new(re, im);
        let bound = fkbeta_hat_sup_bound(2, 3, beta).unwrap();
        prop_assert!(bound.envelope(beta, xi + step) <= bound.envelope(beta, xi) * (1.0 + 1e-14));
        prop_assert!(bound.envelope(beta, -xi - step) <= bound.envelope(beta, -xi) * (1.0 + 1e-14));
    }
}
