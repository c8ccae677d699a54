use heisenberg_fractional::heisenberg::MeasureSpec;
use heisenberg_fractional::quad::QuadratureSpec;
use heisenberg_fractional::spectrum::*;
use heisenberg_fractional::Complex64;

fn quad() -> QuadratureSpec {
    QuadratureSpec {
        tol: 1e-12,
        rel_tol: 1e-11,
        max_subdiv: 20_000,
        truncation_radius: 0.0,
    }
}

#[test]
fn radial_factor_three_routes_agree() {
    let q = quad();
    for (alpha, z, lambda, a) in [
        (0u32, Complex64::new(-1.0 / 3.0, 0.0), 2.0, 1.0),
        (3, Complex64::new(-1.0 / 3.0, 1.0), -0.5, 1.0),
        (5, Complex64::new(0.2, -3.0), 7.0, 0.5),
        (1, Complex64::new(-0.1, 0.4), -3.0, -2.0),
    ] {
        let c = (z - 1.0) * 1.0;
        let s_form = diag_factor(alpha, c, lambda, a, &q).unwrap();
        let sigma = diag_factor_sigma_form(alpha, c, lambda, a, &q).unwrap();
        let conv = diag_factor_via_transform(alpha, c, lambda, a, &q).unwrap();
        let scale = s_form.norm();
        assert!((s_form - sigma).norm() < 1e-9 * scale, "{s_form} {sigma}");
        assert!((s_form - conv).norm() < 1e-6 * scale, "{s_form} {conv}");
    }
}

#[test]
fn product_entry_factorizes() {
    let q = quad();
    let z = Complex64::new(-0.5, 0.7);
    let query = SpectralQuery {
        measure: MeasureSpec::product_fractional(1.0, vec![1.0, -0.5]).unwrap(),
        z,
        cutoff: Cutoff::Finite(10),
        alpha: vec![2, 4],
        lambda: 3.0,
    };
    let mol = MollifierSpec::default();
    let v = nu_quadrature(&query, &mol, &q).unwrap();
    let c = (z - 1.0) * 0.5;
    let f1 = diag_factor(2, c, 3.0, 1.0, &q).unwrap();
    let f2 = diag_factor(4, c, 3.0, -0.5, &q).unwrap();
    let pre = heisenberg_fractional::special_fn::fractional_kernel(Complex64::new(1.0, 0.0) - z, -3.0).unwrap()
        * mollifier_phi_n(&mol, Cutoff::Finite(10), 3.0).unwrap();
    let expect = pre * f1 * f2;
    assert!((v.value - expect).norm() < 1e-12 * expect.norm());
}

#[test]
fn radial_entry_two_parameterizations() {
    let q = quad();
    let mol = MollifierSpec::default();
    let query = SpectralQuery {
        measure: MeasureSpec::radial_power(1, 2).unwrap(),
        z: Complex64::new(-1.0, 0.0),
        cutoff: Cutoff::Infinite,
        alpha: vec![2],
        lambda: 4.0,
    };
    let s = nu_tilde_quadrature(&query, RadialForm::S, &mol, &q).unwrap();
    let sig = nu_tilde_quadrature(&query, RadialForm::Sigma, &mol, &q).unwrap();
    assert!((s.value - sig.value).norm() < 1e-8 * s.value.norm(), "{} {}", s.value, sig.value);
}

#[test]
fn endpoint_bound_holds_on_sample() {
    let q = quad();
    let mol = MollifierSpec::default();
    let re = -1.0 / 3.0;
    for im in [0.0, 1.0, -1.0, 3.0, -3.0] {
        let z = Complex64::new(re, im);
        let b = nu_endpoint_bound(1, 1.0, z, &mol).unwrap();
        for alpha in [0u32, 7, 30] {
            for lambda in [-64.0, -1.0, 1.0 / 64.0, 8.0] {
                let query = SpectralQuery {
                    measure: MeasureSpec::product_fractional(1.0, vec![1.0]).unwrap(),
                    z,
                    cutoff: Cutoff::Infinite,
                    alpha: vec![alpha],
                    lambda,
                };
                let v = nu_quadrature(&query, &mol, &q).unwrap();
                let r = v.value.norm() / b.envelope;
                assert!(r <= 1.0, "im={im} alpha={alpha} lambda={lambda} ratio={r}");
            }
        }
    }
}

#[test]
fn van_der_corput_spread() {
    let q = QuadratureSpec {
        tol: 1e-9,
        rel_tol: 1e-8,
        max_subdiv: 200_000,
        truncation_radius: 0.0,
    };
    for m in [2u32, 3] {
        let lambdas: Vec<f64> = (0..=10).map(|e| 2f64.powi(e)).collect();
        let r = van_der_corput_ratio(m, &lambdas, None, &q).unwrap();
        let mx = r.iter().cloned().fold(0.0, f64::max);
        let mn = r.iter().cloned().fold(f64::INFINITY, f64::min);
        eprintln!("m={m} ratios={r:?}");
        assert!(mx / mn <= 3.0);
        assert!(r[0] <= 1.0 + 1e-12);
    }
}
