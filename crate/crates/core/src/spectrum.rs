//! Diagonal entries of polyradial kernels and the oscillatory factors that
//! control them.
//!
//! For the analytic family on `H^n` the entry indexed by `(alpha, lambda)` is
//!
//! ```text
//! nu = I_{1-z}(-lambda) phi_N(lambda) prod_j int_0^inf eta(r^2) L_{alpha_j}^0(|lambda| r^2/2)
//!        e^{-|lambda| r^2/4} e^{i lambda a_j r^2} r^{1 + (z-1) gamma/n} dr
//! ```
//!
//! and for the radial measure on the graph of `|w|^{2m}`
//!
//! ```text
//! nu = k!/(k+n-1)! I_{1-z}(-lambda) phi_N(lambda) int_0^inf eta(s^2) L_k^{n-1}(|lambda| s^2/2)
//!        e^{-|lambda| s^2/4} e^{i lambda s^{2m}} s^{2n-1+(1-z) gamma} ds.
//! ```
//!
//! Fourier transforms follow `g^(xi) = int g(t) e^{-i xi t} dt`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heisenberg::{radial_gamma, MeasureSpec};
use crate::laguerre_transform::{fkbeta_hat_closed, TransformQuery};
use crate::quad::{endpoint_power, integrate_with_breaks, Estimate, QuadratureSpec};
use crate::special_fn::{bump, fractional_kernel, gamma, gamma_real, laguerre, log_gamma};

/// `N` in `phi_N(lambda) = H(lambda / N)`, or the limit `N = inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Cutoff {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Cutoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cutoff::Finite(n) => write!(f, "{n}"),
            Cutoff::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Cutoff {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(Cutoff::Infinite);
        }
        match s.parse::<u32>() {
            Ok(n) if n >= 1 => Ok(Cutoff::Finite(n)),
            _ => Err(Error::invalid("N", format!("expected a positive integer or `inf`, got `{s}`"))),
        }
    }
}

/// The mollifier `H`, fixed by `H^(xi) = (5/6) eta(5 xi / 2)`.
///
/// `H^` is even, non-negative, supported in `[-4/5, 4/5]` and has unit
/// integral (`int eta = 3`), so `H` is real, even and `|H| <= H(0) = 1/(2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MollifierSpec {
    pub dilation: f64,
}

impl Default for MollifierSpec {
    fn default() -> Self {
        MollifierSpec { dilation: 2.5 }
    }
}

impl MollifierSpec {
    /// `H^(xi)`.
    pub fn h_hat(&self, xi: f64) -> f64 {
        self.dilation / 3.0 * bump(self.dilation * xi)
    }

    pub fn support_radius(&self) -> f64 {
        2.0 / self.dilation
    }

    /// `H(x) = (1/2pi) int H^(xi) e^{i x xi} d xi`.
    pub fn h(&self, x: f64) -> Result<f64> {
        let r = self.support_radius();
        let quad = QuadratureSpec {
            tol: 1e-15,
            rel_tol: 1e-13,
            max_subdiv: 2000,
            truncation_radius: 0.0,
        };
        let mut breaks = vec![0.0, 1.0 / self.dilation];
        let width = if x != 0.0 { (PI / x.abs()).min(r) } else { r };
        let mut s = 1.0 / self.dilation + width;
        while s < r {
            breaks.push(s);
            s += width;
        }
        breaks.push(r);
        let est = integrate_with_breaks(
            |xi: f64| self.h_hat(xi) * (x * xi).cos(),
            &breaks,
            quad.tol,
            quad.rel_tol,
            quad.max_subdiv,
        )
        .require(1e-12)?;
        Ok(est.value / PI)
    }

    /// `sup |H| = H(0) = 1/(2 pi)`.
    pub fn sup_norm(&self) -> f64 {
        1.0 / (2.0 * PI)
    }
}

/// `phi_N(lambda) = H(lambda / N)`; the infinite cutoff gives `H(0)`.
pub fn mollifier_phi_n(mol: &MollifierSpec, n_cut: Cutoff, lambda: f64) -> Result<f64> {
    match n_cut {
        Cutoff::Infinite => mol.h(0.0),
        Cutoff::Finite(0) => Err(Error::invalid("N", "must be at least 1")),
        Cutoff::Finite(n) => mol.h(lambda / n as f64),
    }
}

/// `eta^(xi) = int eta(t) e^{-i xi t} dt`, real and even.
pub fn bump_hat(xi: f64) -> f64 {
    let x = xi.abs();
    // eta = 1 on [-1, 1]
    let plateau = if x == 0.0 { 2.0 } else { 2.0 * x.sin() / x };
    let width = if x > 0.0 { (PI / x).min(0.25) } else { 0.25 };
    let count = (1.0 / width).ceil() as usize;
    let mut breaks: Vec<f64> = (0..count).map(|i| 1.0 + i as f64 * width).collect();
    breaks.push(2.0);
    let est = integrate_with_breaks(|t: f64| bump(t) * (x * t).cos(), &breaks, 1e-15, 0.0, 4000);
    plateau + 2.0 * est.value
}

const BUMP_HAT_CUTOFF: f64 = 400.0;

/// `||eta^||_1`, computed once. `|eta^(xi)|` is below `1e-14` beyond `|xi| = 400`.
pub fn bump_hat_l1() -> f64 {
    static CELL: OnceLock<f64> = OnceLock::new();
    *CELL.get_or_init(|| {
        let mut breaks: Vec<f64> = (0..=(BUMP_HAT_CUTOFF as usize)).map(|i| i as f64).collect();
        breaks.dedup();
        let est = integrate_with_breaks(|xi: f64| bump_hat(xi).abs(), &breaks, 1e-11, 0.0, 20_000);
        2.0 * est.value
    })
}

/// One diagonal entry request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralQuery {
    /// `ProductFractional`/`AnalyticFamily` (supplying `gamma`, `a`) or `RadialPower`.
    pub measure: MeasureSpec,
    pub z: Complex64,
    pub cutoff: Cutoff,
    /// Multi-index `alpha` (length `n`), or `[k]` for the radial measure.
    pub alpha: Vec<u32>,
    pub lambda: f64,
}

/// A computed entry with its pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct NuValue {
    pub value: Complex64,
    /// `I_{1-z}(-lambda) phi_N(lambda)` (times `k!/(k+n-1)!` in the radial case).
    pub prefactor: Complex64,
    /// Per-plane radial integrals (one entry in the radial case).
    pub factors: Vec<Complex64>,
    pub error: f64,
}

/// Admissible strip for the analytic family: `[-(2n - gamma)/(2 + gamma), 1]`.
pub fn product_strip(n: usize, gamma: f64) -> (f64, f64) {
    (-(2.0 * n as f64 - gamma) / (2.0 + gamma), 1.0)
}

/// Admissible strip for the radial measure: `[-n, 1]`.
pub fn radial_strip(n: usize) -> (f64, f64) {
    (-(n as f64), 1.0)
}

/// `StripViolation` unless `lo <= re_z <= hi` up to `1e-12`.
pub fn check_strip(re_z: f64, (lo, hi): (f64, f64)) -> Result<()> {
    let slack = 1e-12;
    if re_z < lo - slack || re_z > hi + slack {
        return Err(Error::StripViolation { re_z, lo, hi });
    }
    Ok(())
}

/// `int_0^b g(s) s^beta ds` with `g` smooth and oscillating at most as fast
/// as `e^{i freq s}`: the first panel uses `s = s0 v^p`, the rest are cut at
/// half periods and at `extra` breakpoints.
fn singular_oscillatory<G: Fn(f64) -> Complex64>(
    g: G,
    beta: Complex64,
    b: f64,
    freq: f64,
    extra: &[f64],
    tol: f64,
    quad: &QuadratureSpec,
) -> Estimate<Complex64> {
    let half = if freq != 0.0 { PI / freq.abs() } else { f64::INFINITY };
    let s0 = half.min(0.25 * b);
    let p = endpoint_power(beta);
    let head = integrate_with_breaks(
        |v: f64| {
            if v == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let s = s0 * v.powi(p);
            let jac = s0 * p as f64 * v.powi(p - 1);
            g(s) * (beta * s.ln()).exp() * jac
        },
        &[0.0, 1.0],
        0.5 * tol,
        quad.rel_tol,
        quad.max_subdiv,
    );
    let mut breaks = vec![s0];
    let step = half.min(b);
    let mut s = s0 + step;
    while s < b && breaks.len() < 200_000 {
        breaks.push(s);
        s += step;
    }
    for &e in extra {
        if e > s0 && e < b {
            breaks.push(e);
        }
    }
    breaks.push(b);
    breaks.sort_by(|x, y| x.total_cmp(y));
    breaks.dedup();
    let tail = integrate_with_breaks(
        |s: f64| g(s) * (beta * s.ln()).exp(),
        &breaks,
        0.5 * tol,
        quad.rel_tol,
        quad.max_subdiv.max(4 * breaks.len()),
    );
    Estimate {
        value: head.value + tail.value,
        error: head.error + tail.error,
        roundoff: head.roundoff + tail.roundoff,
        evaluations: head.evaluations + tail.evaluations,
        intervals: head.intervals + tail.intervals,
        converged: head.converged && tail.converged,
    }
}

/// The radial integral
/// `int_0^inf eta(r^2) L_alpha^0(|lambda| r^2/2) e^{-|lambda| r^2/4} e^{i lambda a r^2} r^{1+c} dr`,
/// computed in `s = r^2` as `(1/2) int_0^2 ... s^{c/2} ds`.
pub fn diag_factor(alpha: u32, c: Complex64, lambda: f64, a: f64, quad: &QuadratureSpec) -> Result<Complex64> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::invalid("lambda", "must be non-zero and finite"));
    }
    let beta = c * 0.5;
    if !(beta.re > -1.0) {
        return Err(Error::invalid("z", "radial exponent not integrable at 0"));
    }
    let l = lambda.abs();
    let g = |s: f64| {
        let amp = bump(s) * laguerre(alpha, 0.0, 0.5 * l * s) * (-0.25 * l * s).exp();
        Complex64::from_polar(amp, lambda * a * s)
    };
    let est = singular_oscillatory(g, beta, 2.0, lambda * a, &[1.0], quad.tol, quad);
    let target = quad.target(est.value.norm());
    let est = est.require(target)?;
    Ok(0.5 * est.value)
}

/// The same radial integral after `sigma = |lambda| r^2 / 2`:
/// `2^beta |lambda|^{-(1+beta)} int eta(2 sigma/|lambda|) L_alpha^0(sigma) e^{-sigma/2}
/// e^{2 i sgn(lambda) a sigma} sigma^beta d sigma` with `beta = c/2`.
pub fn diag_factor_sigma_form(
    alpha: u32,
    c: Complex64,
    lambda: f64,
    a: f64,
    quad: &QuadratureSpec,
) -> Result<Complex64> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::invalid("lambda", "must be non-zero and finite"));
    }
    let beta = c * 0.5;
    let l = lambda.abs();
    let sgn = lambda.signum();
    let g = |sig: f64| {
        let amp = bump(2.0 * sig / l) * laguerre(alpha, 0.0, sig) * (-0.5 * sig).exp();
        Complex64::from_polar(amp, 2.0 * sgn * a * sig)
    };
    let est = singular_oscillatory(g, beta, l, 2.0 * a, &[0.5 * l], quad.tol * l, quad);
    let target = quad.target(est.value.norm()).max(quad.tol * l);
    let est = est.require(target)?;
    let scale = (beta * std::f64::consts::LN_2 - (beta + 1.0) * l.ln()).exp();
    Ok(scale * est.value)
}

/// The same radial integral as a convolution of transforms,
/// `2^beta |lambda|^{-(1+beta)} (F^ * G_lambda^)(-2 sgn(lambda) a) / (2 pi)`,
/// with `F = chi_{(0,inf)} L_alpha^0 e^{-sigma/2} sigma^beta` in closed form and
/// `G_lambda^(y) = (|lambda|/2) eta^(|lambda| y / 2)`.
pub fn diag_factor_via_transform(
    alpha: u32,
    c: Complex64,
    lambda: f64,
    a: f64,
    quad: &QuadratureSpec,
) -> Result<Complex64> {
    if lambda == 0.0 {
        return Err(Error::invalid("lambda", "must be non-zero"));
    }
    let beta = c * 0.5;
    let l = lambda.abs();
    let x0 = -2.0 * lambda.signum() * a;
    // G^ is negligible once |lambda| y / 2 > BUMP_HAT_CUTOFF
    let reach = 2.0 * BUMP_HAT_CUTOFF / l;
    let step = (PI / l).min(reach / 64.0).max(reach / 20_000.0);
    let mut breaks = vec![-reach];
    let mut y = -reach + step;
    while y < reach {
        breaks.push(y);
        y += step;
    }
    breaks.push(reach);
    let mut failure = None;
    let est = integrate_with_breaks(
        |y: f64| {
            let q = TransformQuery {
                n: 1,
                k: alpha,
                beta,
                xi: x0 - y,
            };
            match fkbeta_hat_closed(&q) {
                Ok(f) => f * (0.5 * l * bump_hat(0.5 * l * y)),
                Err(e) => {
                    failure = Some(e);
                    Complex64::new(0.0, 0.0)
                }
            }
        },
        &breaks,
        quad.tol,
        quad.rel_tol,
        quad.max_subdiv.max(4 * breaks.len()),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let scale = (beta * std::f64::consts::LN_2 - (beta + 1.0) * l.ln()).exp();
    Ok(scale * est.value / (2.0 * PI))
}

fn product_parameters(q: &SpectralQuery) -> Result<(f64, Vec<f64>)> {
    match &q.measure {
        MeasureSpec::ProductFractional { gamma, a } => Ok((*gamma, a.clone())),
        MeasureSpec::AnalyticFamily { gamma, a, z } => {
            if (z - q.z).norm() > 0.0 {
                return Err(Error::invalid("z", "query z differs from the measure's z"));
            }
            Ok((*gamma, a.clone()))
        }
        _ => Err(Error::invalid("measure", "expected a product measure")),
    }
}

/// `nu_{N,z}(alpha, lambda)` for the analytic family by quadrature of each
/// radial factor.
pub fn nu_quadrature(q: &SpectralQuery, mol: &MollifierSpec, quad: &QuadratureSpec) -> Result<NuValue> {
    q.measure.validate()?;
    quad.validate()?;
    let (gamma_, a) = product_parameters(q)?;
    let n = a.len();
    if q.alpha.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: q.alpha.len(),
        });
    }
    if q.lambda == 0.0 || !q.lambda.is_finite() {
        return Err(Error::invalid("lambda", "must be non-zero and finite"));
    }
    check_strip(q.z.re, product_strip(n, gamma_))?;
    let c = (q.z - 1.0) * (gamma_ / n as f64);
    let kernel = fractional_kernel(Complex64::new(1.0, 0.0) - q.z, -q.lambda)?;
    let phi = mollifier_phi_n(mol, q.cutoff, q.lambda)?;
    let prefactor = kernel * phi;
    let mut factors = Vec::with_capacity(n);
    let mut value = prefactor;
    for j in 0..n {
        let f = diag_factor(q.alpha[j], c, q.lambda, a[j], quad)?;
        value *= f;
        factors.push(f);
    }
    Ok(NuValue {
        value,
        prefactor,
        factors,
        error: quad.tol,
    })
}

/// Bound on the diagonal entries on the line `Re z = -(2n - gamma)/(2 + gamma)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndpointBound {
    pub n: usize,
    pub gamma: f64,
    pub z: Complex64,
    /// `A_z` with every absorbed constant set to 1.
    pub structural: f64,
    /// The explicit constant `2^{-(1 - Re z)/2} (2^{2 Re beta + 1} / (2 pi))^n`
    /// produced by the chain `|I_{1-z}|`, the change of variables and `1/(2pi)`.
    pub constant: f64,
    /// `constant * structural * e^{(|Im z| - Im z) pi gamma / 4}`: a bound for
    /// every `N`, `alpha` and `lambda`.
    pub envelope: f64,
}

/// `A_z = e^{Im z pi gamma/4} ||H||_inf Gamma(-Re beta)^n Gamma(Re beta + 1)^n ||eta^||_1^n
/// / (|Gamma((1-z)/2)| |Gamma(-beta)|^n)` with `beta = (z-1) gamma/(2n)`.
///
/// The envelope uses `e^{|Im z| pi gamma / 4}`: maximising `|(1/2 + i xi)^{-(beta+1)}|`
/// over `xi` gives `e^{|Im beta| pi/2}` per plane, whatever the sign of `Im z`.
pub fn nu_endpoint_bound(n: usize, gamma_: f64, z: Complex64, mol: &MollifierSpec) -> Result<EndpointBound> {
    if n == 0 {
        return Err(Error::invalid("n", "must be at least 1"));
    }
    let nf = n as f64;
    if !(gamma_ > 0.0 && gamma_ < 2.0 * nf) {
        return Err(Error::invalid("gamma", "requires 0 < gamma < 2n"));
    }
    let line = product_strip(n, gamma_).0;
    if (z.re - line).abs() > 1e-12 {
        return Err(Error::StripViolation {
            re_z: z.re,
            lo: line,
            hi: line,
        });
    }
    let beta = (z - 1.0) * (gamma_ / (2.0 * nf));
    let g1 = gamma_real(-beta.re)?;
    let g2 = gamma_real(beta.re + 1.0)?;
    let d1 = gamma((Complex64::new(1.0, 0.0) - z) * 0.5)?.norm();
    let d2 = gamma(-beta)?.norm();
    let eta_l1 = bump_hat_l1();
    let growth = z.im * PI * gamma_ / 4.0;
    let structural = growth.exp() * mol.sup_norm() * (g1 * g2 * eta_l1 / d2).powi(n as i32) / d1;
    let constant =
        2f64.powf(-(1.0 - z.re) / 2.0) * (2f64.powf(2.0 * beta.re + 1.0) / (2.0 * PI)).powi(n as i32);
    let envelope = constant * structural * ((z.im.abs() - z.im) * PI * gamma_ / 4.0).exp();
    Ok(EndpointBound {
        n,
        gamma: gamma_,
        z,
        structural,
        constant,
        envelope,
    })
}

/// Points where a phase `psi`, monotone on `[a, b]`, crosses multiples of `pi`.
fn monotone_phase_breaks<P: Fn(f64) -> f64>(psi: &P, a: f64, b: f64, out: &mut Vec<f64>, limit: usize) {
    let (pa, pb) = (psi(a), psi(b));
    let (lo, hi) = if pa <= pb { (pa, pb) } else { (pb, pa) };
    let first = (lo / PI).floor() as i64 + 1;
    let last = (hi / PI).ceil() as i64 - 1;
    if last < first {
        return;
    }
    let count = (last - first + 1) as usize;
    let stride = count.div_ceil(limit.max(1)).max(1);
    let increasing = pb >= pa;
    let mut level = first;
    while level <= last {
        let target = level as f64 * PI;
        let (mut x0, mut x1) = (a, b);
        for _ in 0..60 {
            let mid = 0.5 * (x0 + x1);
            if (psi(mid) < target) == increasing {
                x0 = mid;
            } else {
                x1 = mid;
            }
        }
        out.push(0.5 * (x0 + x1));
        level += stride as i64;
    }
}

/// `R^_lambda(xi) = int_0^{|lambda|} e^{i (2^m sgn(lambda) |lambda|^{1-m} sigma^m - xi sigma)} d sigma`.
///
/// Computed as `|lambda| int_0^1 e^{i |lambda| (2^m sgn s^m - xi s)} ds`, with
/// breakpoints at every half period of the phase on each side of its
/// stationary point.
pub fn r_lambda_hat(m: u32, lambda: f64, xi: f64, quad: &QuadratureSpec) -> Result<Complex64> {
    if m < 2 {
        return Err(Error::invalid("m", "must be at least 2"));
    }
    if lambda == 0.0 || !lambda.is_finite() || !xi.is_finite() {
        return Err(Error::invalid("lambda", "must be non-zero and finite"));
    }
    let l = lambda.abs();
    let sgn = lambda.signum();
    let c = 2f64.powi(m as i32) * sgn;
    let psi = |s: f64| l * (c * s.powi(m as i32) - xi * s);
    // psi' = l (m c s^{m-1} - xi) vanishes at most once on (0, 1)
    let mut pieces = vec![0.0];
    let ratio = xi / (m as f64 * c);
    if ratio > 0.0 {
        let s_star = ratio.powf(1.0 / (m as f64 - 1.0));
        if s_star > 0.0 && s_star < 1.0 {
            pieces.push(s_star);
        }
    }
    pieces.push(1.0);
    let mut breaks = pieces.clone();
    for w in pieces.windows(2) {
        monotone_phase_breaks(&psi, w[0], w[1], &mut breaks, 100_000);
    }
    breaks.sort_by(|a, b| a.total_cmp(b));
    breaks.dedup();
    let est = integrate_with_breaks(
        |s: f64| Complex64::from_polar(1.0, psi(s)),
        &breaks,
        quad.tol / l,
        quad.rel_tol,
        quad.max_subdiv.max(4 * breaks.len()),
    );
    let target = quad.target(est.value.norm()).max(quad.tol / l);
    let est = est.require(target)?;
    Ok(l * est.value)
}

/// `sup_xi |R^_lambda(xi)|` over a grid, refined by golden-section search
/// around the best grid points.
pub fn r_lambda_sup(m: u32, lambda: f64, xi_grid: &[f64], quad: &QuadratureSpec) -> Result<(f64, f64)> {
    if xi_grid.is_empty() {
        return Err(Error::invalid("xi_grid", "empty"));
    }
    let mut grid: Vec<f64> = xi_grid.to_vec();
    grid.sort_by(|a, b| a.total_cmp(b));
    let values: Vec<f64> = grid
        .iter()
        .map(|&xi| r_lambda_hat(m, lambda, xi, quad).map(|v| v.norm()))
        .collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
    let (mut best, mut best_xi) = (values[order[0]], grid[order[0]]);
    for &i in order.iter().take(3) {
        let lo = if i > 0 { grid[i - 1] } else { grid[i] };
        let hi = if i + 1 < grid.len() { grid[i + 1] } else { grid[i] };
        if hi <= lo {
            continue;
        }
        let f = |xi: f64| r_lambda_hat(m, lambda, xi, quad).map(|v| v.norm());
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (lo, hi);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (f(c)?, f(d)?);
        for _ in 0..40 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = f(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = f(d)?;
            }
        }
        for (v, x) in [(fc, c), (fd, d)] {
            if v > best {
                best = v;
                best_xi = x;
            }
        }
    }
    Ok((best, best_xi))
}

/// Default `xi` grid for the sup of `|R^_lambda|`: the stationary range
/// `[0, m 2^m]` (up to the sign of `lambda`) with margins, denser near 0.
pub fn default_xi_grid(m: u32, lambda: f64) -> Vec<f64> {
    let top = m as f64 * 2f64.powi(m as i32);
    let sgn = lambda.signum();
    let mut g: Vec<f64> = (0..=200).map(|i| sgn * (-1.0 + (top + 2.0) * i as f64 / 200.0)).collect();
    g.extend((0..=100).map(|i| sgn * (-0.5 + i as f64 / 100.0)));
    g.sort_by(|a, b| a.total_cmp(b));
    g.dedup();
    g
}

/// `sup_xi |R^_lambda(xi)| / |lambda|^{(m-1)/m}` for each `lambda`.
pub fn van_der_corput_ratio(
    m: u32,
    lambdas: &[f64],
    xi_grid: Option<&[f64]>,
    quad: &QuadratureSpec,
) -> Result<Vec<f64>> {
    lambdas
        .iter()
        .map(|&l| {
            let owned;
            let grid = match xi_grid {
                Some(g) => g,
                None => {
                    owned = default_xi_grid(m, l);
                    &owned
                }
            };
            let (sup, _) = r_lambda_sup(m, l, grid, quad)?;
            Ok(sup / l.abs().powf((m as f64 - 1.0) / m as f64))
        })
        .collect()
}

/// Which parameterization [`nu_tilde_quadrature`] integrates in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RadialForm {
    /// The original radial variable `s`.
    S,
    /// `sigma = |lambda| s^2 / 2`.
    Sigma,
}

/// Diagonal entry for the radial measure `eta(|w|^2) |w|^gamma` on the graph of `|w|^{2m}`.
pub fn nu_tilde_quadrature(
    q: &SpectralQuery,
    form: RadialForm,
    mol: &MollifierSpec,
    quad: &QuadratureSpec,
) -> Result<NuValue> {
    quad.validate()?;
    let MeasureSpec::RadialPower { n, m } = q.measure else {
        return Err(Error::invalid("measure", "expected the radial measure"));
    };
    q.measure.validate()?;
    if q.alpha.len() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: q.alpha.len(),
        });
    }
    if q.lambda == 0.0 || !q.lambda.is_finite() {
        return Err(Error::invalid("lambda", "must be non-zero and finite"));
    }
    check_strip(q.z.re, radial_strip(n))?;
    let k = q.alpha[0];
    let g = radial_gamma(n, m);
    let alpha = (n - 1) as f64;
    let l = q.lambda.abs();
    let sgn = q.lambda.signum();
    let one_minus_z = Complex64::new(1.0, 0.0) - q.z;

    let integral = match form {
        RadialForm::S => {
            // s^{2n-1+(1-z) gamma} ds; the phase lambda s^{2m} crosses k pi at (k pi/|lambda|)^{1/2m}
            let expo = one_minus_z * g + (2.0 * n as f64 - 1.0);
            let b = 2f64.sqrt();
            let mut breaks = vec![0.0, 1.0, b];
            let phase = |s: f64| l * s.powi(2 * m as i32);
            monotone_phase_breaks(&phase, 0.0, b, &mut breaks, 200_000);
            breaks.sort_by(|x, y| x.total_cmp(y));
            breaks.dedup();
            let est = integrate_with_breaks(
                |s: f64| {
                    if s == 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    let amp = bump(s * s) * laguerre(k, alpha, 0.5 * l * s * s) * (-0.25 * l * s * s).exp();
                    Complex64::from_polar(amp, q.lambda * s.powi(2 * m as i32)) * (expo * s.ln()).exp()
                },
                &breaks,
                quad.tol,
                quad.rel_tol,
                quad.max_subdiv.max(4 * breaks.len()),
            );
            let target = quad.target(est.value.norm());
            est.require(target)?.value
        }
        RadialForm::Sigma => {
            let beta = one_minus_z * (0.5 * g) + alpha;
            let mut breaks = vec![0.0, 0.5 * l, l];
            let phase = |sig: f64| (2.0 * sig).powi(m as i32) * l.powf(1.0 - m as f64);
            monotone_phase_breaks(&phase, 0.0, l, &mut breaks, 200_000);
            breaks.sort_by(|x, y| x.total_cmp(y));
            breaks.dedup();
            let est = integrate_with_breaks(
                |sig: f64| {
                    if sig == 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    let amp = bump(2.0 * sig / l) * laguerre(k, alpha, sig) * (-0.5 * sig).exp();
                    Complex64::from_polar(amp, sgn * phase(sig)) * (beta * sig.ln()).exp()
                },
                &breaks,
                quad.tol * l,
                quad.rel_tol,
                quad.max_subdiv.max(4 * breaks.len()),
            );
            let target = quad.target(est.value.norm()).max(quad.tol * l);
            let v = est.require(target)?.value;
            let scale = (beta * std::f64::consts::LN_2 - (beta + 1.0) * l.ln()).exp();
            scale * v
        }
    };
    // k!/(k+n-1)!
    let ratio = (log_gamma(k as f64 + 1.0)? - log_gamma(k as f64 + n as f64)?).exp();
    let kernel = fractional_kernel(one_minus_z, -q.lambda)?;
    let phi = mollifier_phi_n(mol, q.cutoff, q.lambda)?;
    let prefactor = kernel * phi * ratio;
    Ok(NuValue {
        value: prefactor * integral,
        prefactor,
        factors: vec![integral],
        error: quad.tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mollifier_values() {
        let mol = MollifierSpec::default();
        let h0 = mollifier_phi_n(&mol, Cutoff::Finite(1), 0.0).unwrap();
        assert!((h0 - 1.0 / (2.0 * PI)).abs() < 1e-13);
        for lam in [-100.0, -3.0, 0.7, 55.0] {
            assert_eq!(
                mollifier_phi_n(&mol, Cutoff::Infinite, lam).unwrap(),
                mollifier_phi_n(&mol, Cutoff::Infinite, 0.0).unwrap()
            );
            assert!(mollifier_phi_n(&mol, Cutoff::Finite(3), lam).unwrap().abs() <= mol.sup_norm() + 1e-15);
        }
    }

    #[test]
    fn cutoff_parsing() {
        assert_eq!("inf".parse::<Cutoff>().unwrap(), Cutoff::Infinite);
        assert_eq!("10".parse::<Cutoff>().unwrap(), Cutoff::Finite(10));
        assert!("0".parse::<Cutoff>().is_err());
        assert_eq!(Cutoff::Infinite.to_string(), "inf");
    }

    #[test]
    fn bump_hat_at_zero() {
        assert!((bump_hat(0.0) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn fresnel_value() {
        let quad = QuadratureSpec::default();
        let v = r_lambda_hat(2, 1.0, 0.0, &quad).unwrap();
        let expect = Complex64::new(0.230_730_731_216_608_2, 0.402_388_244_671_878_05);
        assert!((v - expect).norm() < 1e-12);
    }

    #[test]
    fn nu_vanishes_at_z_one() {
        let quad = QuadratureSpec::default();
        let q = SpectralQuery {
            measure: MeasureSpec::product_fractional(1.0, vec![0.0]).unwrap(),
            z: Complex64::new(1.0, 0.0),
            cutoff: Cutoff::Finite(1),
            alpha: vec![0],
            lambda: 2.0,
        };
        let v = nu_quadrature(&q, &MollifierSpec::default(), &quad).unwrap();
        assert_eq!(v.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn strip_is_enforced() {
        let quad = QuadratureSpec::default();
        let q = SpectralQuery {
            measure: MeasureSpec::product_fractional(1.0, vec![1.0]).unwrap(),
            z: Complex64::new(-0.5, 0.0),
            cutoff: Cutoff::Infinite,
            alpha: vec![0],
            lambda: 1.0,
        };
        assert!(matches!(
            nu_quadrature(&q, &MollifierSpec::default(), &quad),
            Err(Error::StripViolation { .. })
        ));
    }
}
