//! The Laguerre transform
//!
//! ```text
//! F(xi) = int_0^inf sigma^beta L_k^{n-1}(sigma) e^{-sigma (1/2 + i xi)} d sigma
//! ```
//!
//! computed two ways: adaptive quadrature with a certified truncation tail,
//! and the finite closed form
//!
//! ```text
//! Gamma(beta+1) / u^{beta+1} * sum_{j+l=k} (n-1-beta)_j (beta+1)_l / (j! l!) w^l,
//! u = 1/2 + i xi,  w = -(1/2 - i xi) / (1/2 + i xi).
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::quad::{endpoint_power, integrate_panels, CompensatedSum, QuadratureSpec};
use crate::special_fn::{gamma, gamma_real, laguerre, laguerre_abs_coefficients, log_binomial};

/// Parameters `(n, k, beta, xi)` of one transform value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformQuery {
    pub n: u32,
    pub k: u32,
    pub beta: Complex64,
    pub xi: f64,
}

impl TransformQuery {
    pub fn new(n: u32, k: u32, beta: Complex64, xi: f64) -> Result<Self> {
        let q = TransformQuery { n, k, beta, xi };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("n", "must be at least 1"));
        }
        if !(self.beta.re > -1.0) || !self.beta.im.is_finite() || !self.beta.re.is_finite() {
            return Err(Error::invalid("beta", "requires Re(beta) > -1"));
        }
        if !self.xi.is_finite() {
            return Err(Error::invalid("xi", "must be finite"));
        }
        Ok(())
    }
}

/// `w(xi) = -(1/2 - i xi)/(1/2 + i xi)`, written as `-e^{-2i arg(1/2 + i xi)}`
/// so that `|w| = 1` up to the rounding of one `sin`/`cos` pair.
pub fn w_of_xi(xi: f64) -> Complex64 {
    let theta = xi.atan2(0.5);
    -Complex64::from_polar(1.0, -2.0 * theta)
}

/// Outcome of [`fkbeta_hat_quadrature`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformEstimate {
    pub value: Complex64,
    /// Quadrature error estimate plus the truncation tail bound.
    pub error: f64,
    /// Certified bound on the integral beyond `cutoff`.
    pub truncation: f64,
    pub roundoff: f64,
    pub cutoff: f64,
}

/// Upper bound for `int_S^inf |sigma^beta L_k^{n-1}(sigma)| e^{-sigma/2} d sigma`
/// from the explicit Laguerre coefficients and an incomplete-Gamma tail bound.
pub fn truncation_tail_bound(n: u32, k: u32, re_beta: f64, cutoff: f64) -> f64 {
    let coeffs = laguerre_abs_coefficients(k, (n - 1) as f64);
    let x = 0.5 * cutoff;
    let mut total = 0.0;
    for (i, c) in coeffs.iter().enumerate() {
        // int_S^inf s^{p} e^{-s/2} ds = 2^{p+1} Gamma(p+1, S/2)
        let a = re_beta + i as f64 + 1.0;
        if x <= a {
            return f64::INFINITY;
        }
        // Gamma(a, x) <= x^{a-1} e^{-x} x / (x - a + 1)
        let log_inc = (a - 1.0) * x.ln() - x + (x / (x - a + 1.0)).ln();
        total += c * (a * std::f64::consts::LN_2 + log_inc).exp();
    }
    total
}

fn choose_cutoff(n: u32, k: u32, re_beta: f64, budget: f64) -> f64 {
    let mut s = 4.0 * (k as f64 + n as f64 + re_beta.max(0.0) + 4.0);
    while truncation_tail_bound(n, k, re_beta, s) > budget && s < 1e5 {
        s *= 1.25;
    }
    s
}

/// Adaptive quadrature of the transform.
///
/// The range is cut at a radius whose tail is certified below `tol / 10`
/// (or at `spec.truncation_radius` when set). The first panel uses
/// `sigma = h v^p` to smooth the endpoint behaviour `sigma^beta`; later panels are
/// half periods of `e^{-i xi sigma}` integrated in local coordinates, with the
/// phase of each panel start taken from exact multiples of `pi`.
pub fn fkbeta_hat_quadrature(q: &TransformQuery, spec: &QuadratureSpec) -> Result<TransformEstimate> {
    q.validate()?;
    spec.validate()?;
    let alpha = (q.n - 1) as f64;
    let re_beta = q.beta.re;
    let cutoff = if spec.truncation_radius > 0.0 {
        spec.truncation_radius
    } else {
        choose_cutoff(q.n, q.k, re_beta, spec.tol / 10.0)
    };
    let truncation = truncation_tail_bound(q.n, q.k, re_beta, cutoff);

    let abs_xi = q.xi.abs();
    let sgn = q.xi.signum();
    let h = if abs_xi > 0.0 {
        (std::f64::consts::PI / abs_xi).min(2.0)
    } else {
        2.0
    };
    let half_period = abs_xi > 0.0 && std::f64::consts::PI / abs_xi <= 2.0;
    // |xi| h - pi, tiny when the panels are half periods
    let drift = if half_period {
        abs_xi.mul_add(h, -std::f64::consts::PI)
    } else {
        0.0
    };
    let first = h.min(cutoff);
    let rest = ((cutoff - first) / h).ceil().max(0.0) as usize;
    let mut lengths = Vec::with_capacity(rest + 1);
    lengths.push(1.0);
    for j in 0..rest {
        let start = first + j as f64 * h;
        lengths.push(h.min(cutoff - start));
    }
    let p = endpoint_power(q.beta);
    let beta = q.beta;
    let amplitude = |sigma: f64| -> Complex64 {
        if sigma == 0.0 {
            let at_zero = if beta == Complex64::new(0.0, 0.0) {
                laguerre(q.k, alpha, 0.0)
            } else {
                0.0
            };
            return Complex64::new(at_zero, 0.0);
        }
        let power = (beta * sigma.ln()).exp();
        power * (laguerre(q.k, alpha, sigma) * (-0.5 * sigma).exp())
    };

    let integrand = |panel: usize, tau: f64| -> Complex64 {
        if panel == 0 {
            // sigma = first * v^p
            let v = tau;
            let sigma = first * v.powi(p);
            let jac = first * p as f64 * v.powi(p - 1);
            if jac == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let phase = Complex64::from_polar(1.0, -q.xi * sigma);
            return amplitude(sigma) * phase * jac;
        }
        let j = panel - 1;
        let start = first + j as f64 * h;
        let sigma = start + tau;
        let phase = if half_period {
            // e^{-i xi (first + j h + tau)} with first = h:
            // |xi| (j+1) h = (j+1) pi + (j+1) drift
            let m = j + 1;
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            Complex64::from_polar(sign, -sgn * (m as f64 * drift + abs_xi * tau))
        } else {
            Complex64::from_polar(1.0, -q.xi * sigma)
        };
        amplitude(sigma) * phase
    };

    let budget = (0.9 * spec.tol - truncation).max(0.5 * spec.tol);
    let est = integrate_panels(&lengths, integrand, budget, spec.rel_tol, spec.max_subdiv);
    if !(est.value.re.is_finite() && est.value.im.is_finite()) {
        return Err(Error::NonFinite("fkbeta_hat_quadrature"));
    }
    let error = est.error + truncation;
    let target = spec.target(est.value.norm());
    if error > target && !est.converged {
        return Err(Error::ToleranceNotMet {
            estimate: est.value.norm(),
            error,
            tolerance: target,
        });
    }
    if truncation > target {
        return Err(Error::ToleranceNotMet {
            estimate: est.value.norm(),
            error,
            tolerance: target,
        });
    }
    Ok(TransformEstimate {
        value: est.value,
        error,
        truncation,
        roundoff: est.roundoff,
        cutoff,
    })
}

/// Closed form of the transform.
///
/// Coefficients `(a)_j / j!` are built by the ratio recurrence
/// `c_j = c_{j-1} (a + j - 1) / j`, so no factorial is ever formed and
/// `k` in the hundreds stays in range.
pub fn fkbeta_hat_closed(q: &TransformQuery) -> Result<Complex64> {
    q.validate()?;
    let u = Complex64::new(0.5, q.xi);
    let w = w_of_xi(q.xi);
    let a = Complex64::new((q.n - 1) as f64, 0.0) - q.beta;
    let b = q.beta + 1.0;
    let k = q.k as usize;
    let left = ratio_coefficients(a, k);
    let right = ratio_coefficients(b, k);
    let mut sum = CompensatedSum::new();
    let mut w_pow = Complex64::new(1.0, 0.0);
    for l in 0..=k {
        sum.add(left[k - l] * right[l] * w_pow);
        w_pow *= w;
    }
    let series: Complex64 = sum.value();
    let prefactor = gamma(b)? * (-(b * u.ln())).exp();
    let value = prefactor * series;
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite("fkbeta_hat_closed"))
    }
}

fn ratio_coefficients(a: Complex64, k: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(k + 1);
    let mut c = Complex64::new(1.0, 0.0);
    out.push(c);
    for j in 1..=k {
        c = c * (a + (j - 1) as f64) / j as f64;
        out.push(c);
    }
    out
}

fn ratio_coefficients_dd(a: TwoFloat, k: usize) -> Vec<TwoFloat> {
    let mut out = Vec::with_capacity(k + 1);
    let mut c = TwoFloat::from(1.0);
    out.push(c);
    for j in 1..=k {
        c = c * (a + (j - 1) as f64) / j as f64;
        out.push(c);
    }
    out
}

/// `sum_{j+l=k} (n-1-b)_j (b+1)_l / (j! l!)` with `b = re_beta`.
///
/// The terms cancel heavily when `n - 1 - b < 0` and `k` is large, so the sum
/// is accumulated in double-double arithmetic.
pub fn lemma7_sum(n: u32, k: u32, re_beta: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("n", "must be at least 1"));
    }
    if !(re_beta > -1.0) || !re_beta.is_finite() {
        return Err(Error::invalid("re_beta", "requires re_beta > -1"));
    }
    let k = k as usize;
    let b = TwoFloat::from(re_beta);
    let a = TwoFloat::from((n - 1) as f64) - b;
    let left = ratio_coefficients_dd(a, k);
    let right = ratio_coefficients_dd(b + 1.0, k);
    let mut sum = TwoFloat::from(0.0);
    for l in 0..=k {
        sum += left[k - l] * right[l];
    }
    Ok(f64::from(sum))
}

/// `ln binom(n+k-1, k)`, the value the sum in [`lemma7_sum`] should equal.
pub fn binomial_log_target(n: u32, k: u32) -> f64 {
    log_binomial((n + k - 1) as u64, k as u64)
}

/// Which estimate produced a [`SupBound`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundRegime {
    /// `n - 1 - Re beta > 0`: Gamma moduli reduced to real parts, and the
    /// remaining sum collapses to `binom(n+k-1, k)`.
    Combinatorial,
    /// Termwise moduli of the closed-form series, used when `n - 1 - Re beta <= 0`.
    Termwise,
}

/// Uniform bound on `|F(xi)|` over `xi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupBound {
    pub value: f64,
    /// The `xi`-independent factor `C` in `|F(xi)| <= C / |u^{beta+1}|`.
    pub coefficient: f64,
    /// Where `1/|u^{beta+1}|` peaks: `Im beta / (2 (Re beta + 1))`.
    pub xi_star: f64,
    pub regime: BoundRegime,
}

impl SupBound {
    /// The envelope `C / |(1/2 + i xi)^{beta+1}|` at a given `xi`.
    pub fn envelope(&self, beta: Complex64, xi: f64) -> f64 {
        self.coefficient * inverse_power_modulus(beta, xi)
    }
}

fn inverse_power_modulus(beta: Complex64, xi: f64) -> f64 {
    let u = Complex64::new(0.5, xi);
    (-(beta.re + 1.0) * u.norm().ln() + beta.im * u.arg()).exp()
}

/// Bound `sup_xi |F(xi)|`, attained by the envelope at `xi_star`.
pub fn fkbeta_hat_sup_bound(n: u32, k: u32, beta: Complex64) -> Result<SupBound> {
    if n == 0 {
        return Err(Error::invalid("n", "must be at least 1"));
    }
    if !(beta.re > -1.0) {
        return Err(Error::OutsideBoundRegime(format!(
            "Re(beta) = {} must exceed -1",
            beta.re
        )));
    }
    let a = Complex64::new((n - 1) as f64, 0.0) - beta;
    let (coefficient, regime) = if a.re > 0.0 {
        let log_binom = binomial_log_target(n, k);
        let num = gamma_real(a.re)? * gamma_real(beta.re + 1.0)?;
        let den = gamma(a)?.norm();
        (num / den * log_binom.exp(), BoundRegime::Combinatorial)
    } else {
        let k = k as usize;
        let left = ratio_coefficients(a, k);
        let right = ratio_coefficients(beta + 1.0, k);
        let total: f64 = (0..=k).map(|l| left[k - l].norm() * right[l].norm()).sum();
        (gamma(beta + 1.0)?.norm() * total, BoundRegime::Termwise)
    };
    let xi_star = beta.im / (2.0 * (beta.re + 1.0));
    let value = coefficient * inverse_power_modulus(beta, xi_star);
    if !value.is_finite() {
        return Err(Error::NonFinite("fkbeta_hat_sup_bound"));
    }
    Ok(SupBound {
        value,
        coefficient,
        xi_star,
        regime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u32, k: u32, beta: Complex64, xi: f64) -> TransformQuery {
        TransformQuery::new(n, k, beta, xi).unwrap()
    }

    fn real(b: f64) -> Complex64 {
        Complex64::new(b, 0.0)
    }

    #[test]
    fn trivial_values_both_routes() {
        let spec = QuadratureSpec::default();
        for (n, k, b, expect) in [(1, 0, 0.0, 2.0), (1, 1, 0.0, -2.0), (2, 0, 1.0, 4.0)] {
            let query = q(n, k, real(b), 0.0);
            let closed = fkbeta_hat_closed(&query).unwrap();
            let quad = fkbeta_hat_quadrature(&query, &spec).unwrap().value;
            assert!((closed - expect).norm() < 1e-13, "{closed}");
            assert!((quad - expect).norm() < 1e-11, "{quad}");
        }
    }

    #[test]
    fn frozen_complex_values() {
        let spec = QuadratureSpec::default();
        let cases = [
            (
                q(1, 7, Complex64::new(-0.3, 0.4), 2.5),
                Complex64::new(-0.042_623_650_567_891_66, 0.241_794_177_817_877_57),
            ),
            (
                q(2, 3, real(1.5), -5.0),
                Complex64::new(-0.094_753_852_446_825_93, 0.019_737_283_658_698_232),
            ),
        ];
        for (query, expect) in cases {
            let closed = fkbeta_hat_closed(&query).unwrap();
            let quad = fkbeta_hat_quadrature(&query, &spec).unwrap().value;
            assert!((closed - expect).norm() / expect.norm() < 1e-12);
            assert!((quad - expect).norm() / expect.norm() < 1e-9);
        }
    }

    #[test]
    fn w_has_unit_modulus() {
        for xi in [-1e6, -40.0, -0.5, 0.0, 0.3, 7.0, 1e8] {
            assert!((w_of_xi(xi).norm() - 1.0).abs() < 1e-15);
        }
        assert!((w_of_xi(0.0) + 1.0).norm() < 1e-16);
    }

    #[test]
    fn lemma7_examples() {
        assert_eq!(lemma7_sum(1, 37, 0.8).unwrap(), 1.0);
        assert_eq!(lemma7_sum(3, 0, -0.2).unwrap(), 1.0);
        assert!((lemma7_sum(2, 1, 0.5).unwrap() - 2.0).abs() < 1e-15);
        assert!((lemma7_sum(1, 500, 1.9).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn large_k_closed_form_is_finite() {
        let v = fkbeta_hat_closed(&q(3, 500, Complex64::new(0.5, 0.2), 3.0)).unwrap();
        assert!(v.re.is_finite() && v.im.is_finite());
    }

    #[test]
    fn sup_bound_regimes() {
        let b = fkbeta_hat_sup_bound(1, 0, real(-1.0 / 3.0)).unwrap();
        assert_eq!(b.regime, BoundRegime::Combinatorial);
        let f0 = fkbeta_hat_closed(&q(1, 0, real(-1.0 / 3.0), 0.0)).unwrap();
        assert!(b.value >= f0.norm());

        let b5 = fkbeta_hat_sup_bound(1, 5, real(-1.0 / 3.0)).unwrap();
        let b9 = fkbeta_hat_sup_bound(1, 9, real(-1.0 / 3.0)).unwrap();
        assert!((b5.value - b9.value).abs() < 1e-14 * b5.value);

        let t = fkbeta_hat_sup_bound(2, 3, real(1.5)).unwrap();
        assert_eq!(t.regime, BoundRegime::Termwise);
        assert!(t.value.is_finite());

        assert!(matches!(
            fkbeta_hat_sup_bound(1, 0, real(-1.0)),
            Err(Error::OutsideBoundRegime(_))
        ));
    }

    #[test]
    fn tail_bound_decreases() {
        let a = truncation_tail_bound(2, 5, 0.5, 60.0);
        let b = truncation_tail_bound(2, 5, 0.5, 120.0);
        assert!(b < a && b > 0.0);
    }

    #[test]
    fn rejects_bad_beta() {
        assert!(TransformQuery::new(1, 0, real(-1.0), 0.0).is_err());
        assert!(TransformQuery::new(0, 0, real(0.0), 0.0).is_err());
    }
}
