use heisenberg_fractional::quad::{integrate, QuadratureSpec};
use heisenberg_fractional::special_fn::{bump, fractional_kernel, gamma, laguerre, log_binomial, pochhammer};
use heisenberg_fractional::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn gamma_recurrence(re in -4.9f64..20.0, im in -5.0f64..5.0) {
        let z = c(re, im);
        prop_assume!((z - z.re.round()).norm() > 1e-3);
        let lhs = gamma(z + 1.0).unwrap();
        let rhs = z * gamma(z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm(), "{z}: {lhs} vs {rhs}");
    }

    #[test]
    fn pochhammer_splits(re in -6.0f64..6.0, im in -2.0f64..2.0, j in 0u32..12, l in 0u32..12) {
        let a = c(re, im);
        let lhs = pochhammer(a, j) * pochhammer(a + j as f64, l);
        let rhs = pochhammer(a, j + l);
        prop_assert!((lhs - rhs).norm() <= 1e-13 * rhs.norm().max(1e-300) + 1e-300);
    }

    #[test]
    fn laguerre_function_bound(n in 1u32..=4, j in 0u32..=50, sigma in 0.0f64..200.0) {
        let v = (laguerre(j, (n - 1) as f64, sigma) * (-0.5 * sigma).exp()).abs();
        let bound = log_binomial((j + n - 1) as u64, j as u64).exp();
        prop_assert!(v <= bound * (1.0 + 1e-10), "{v} > {bound}");
    }

    #[test]
    fn bump_shape(t in -3.0f64..3.0) {
        let v = bump(t);
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert_eq!(v, bump(-t));
        if t.abs() <= 1.0 {
            prop_assert_eq!(v, 1.0);
        }
        if t.abs() >= 2.0 {
            prop_assert_eq!(v, 0.0);
        }
    }
}

#[test]
fn bump_difference_quotients_stay_bounded() {
    for order in 1..=4 {
        let mut peaks = Vec::new();
        for h in [4e-3, 2e-3, 1e-3] {
            let steps = (1.2 / h) as usize;
            let peak = (0..=steps)
                .map(|i| {
                    let t = 0.9 + i as f64 * h;
                    // central difference of the given order
                    let mut d = 0.0;
                    for m in 0..=order {
                        let binom = (0..m).fold(1.0, |acc, i| acc * (order - i) as f64 / (i + 1) as f64);
                        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                        d += sign * binom * bump(t + (order as f64 / 2.0 - m as f64) * h);
                    }
                    (d / h.powi(order as i32)).abs()
                })
                .fold(0.0, f64::max);
            peaks.push(peak);
        }
        let (lo, hi) = peaks.iter().fold((f64::MAX, 0.0f64), |(a, b), &p| (a.min(p), b.max(p)));
        assert!(hi < 1e4 && hi / lo < 1.05, "order {order}: {peaks:?}");
    }
}

/// `int_R I_z(s) h(s) ds` for even `h`, with `s = u^{1/z}` removing the power singularity.
fn pairing(z: f64, h: impl Fn(f64) -> f64, s_max: f64) -> f64 {
    let spec = QuadratureSpec::new(1e-14, 20_000, 0.0).unwrap().with_rel_tol(1e-11);
    let zc = c(z, 0.0);
    let f = |u: f64| {
        if u == 0.0 {
            return 0.0;
        }
        let s = u.powf(1.0 / z);
        let kernel = fractional_kernel(zc, s).unwrap().re / s.powf(z - 1.0);
        kernel * h(s) / z
    };
    2.0 * integrate(f, 0.0, s_max.powf(z), &spec).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // g(s) = e^{-a s^2 / 2} has g^(xi) = (2 pi / a)^{1/2} e^{-xi^2 / (2a)} under g^ = int g e^{-i xi s}
    #[test]
    fn kernel_fourier_duality(z in 0.15f64..0.85, a in 0.3f64..4.0) {
        let s_max = (80.0 * a.max(1.0 / a)).sqrt();
        let g_hat = |s: f64| (2.0 * std::f64::consts::PI / a).sqrt() * (-s * s / (2.0 * a)).exp();
        let g = |s: f64| (-a * s * s / 2.0).exp();
        let lhs = pairing(z, g_hat, s_max);
        let rhs = (2.0 * std::f64::consts::PI).sqrt() * pairing(1.0 - z, g, s_max);
        prop_assert!((lhs - rhs).abs() <= 1e-6 * rhs.abs(), "{lhs} vs {rhs}");
    }
}
