//! The Heisenberg group `H^n = R^{2n} x R`, the measures carried by graphs
//! `t = phi(w)` over it, and direct quadrature of right convolution
//!
//! ```text
//! (f * mu)(x, t) = int f((x, t) . (w, phi(w))^{-1}) density(w) dw.
//! ```
//!
//! Coordinates are ordered `x = (x_1, .., x_n, x_{n+1}, .., x_{2n})` and the
//! `j`-th plane is `w_j = (x_j, x_{n+j})`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{integrate_with_breaks, QuadratureSpec};
use crate::special_fn::{bump, gamma_real};

/// A point `(x, t)` of `H^n`; `x` has length `2n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergPoint {
    pub x: Vec<f64>,
    pub t: f64,
}

impl HeisenbergPoint {
    pub fn new(x: Vec<f64>, t: f64) -> Result<Self> {
        if x.is_empty() || x.len() % 2 != 0 {
            return Err(Error::invalid("x", "length must be a positive even number"));
        }
        Ok(HeisenbergPoint { x, t })
    }

    pub fn identity(n: usize) -> Self {
        HeisenbergPoint {
            x: vec![0.0; 2 * n],
            t: 0.0,
        }
    }

    pub fn n(&self) -> usize {
        self.x.len() / 2
    }
}

/// `B(x, y) = sum_j (y_{n+j} x_j - y_j x_{n+j})`.
pub fn symplectic_b(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.len() % 2 != 0 {
        return Err(Error::invalid("x", "length must be even"));
    }
    let n = x.len() / 2;
    Ok((0..n).map(|j| y[n + j] * x[j] - y[j] * x[n + j]).sum())
}

/// Group law `(x, t)(y, s) = (x + y, t + s + B(x, y)/2)`.
pub fn group_mul(p: &HeisenbergPoint, q: &HeisenbergPoint) -> Result<HeisenbergPoint> {
    let b = symplectic_b(&p.x, &q.x)?;
    let x = p.x.iter().zip(&q.x).map(|(a, b)| a + b).collect();
    Ok(HeisenbergPoint {
        x,
        t: p.t + q.t + 0.5 * b,
    })
}

/// Inverse `(x, t)^{-1} = (-x, -t)`.
pub fn group_inv(p: &HeisenbergPoint) -> HeisenbergPoint {
    HeisenbergPoint {
        x: p.x.iter().map(|v| -v).collect(),
        t: -p.t,
    }
}

/// The measures on graphs over `R^{2n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum MeasureSpec {
    /// Density `prod_j eta(|w_j|^2) |w_j|^{-gamma/n}` on the graph of
    /// `phi(w) = sum_j a_j |w_j|^2`, with `0 < gamma < 2n`.
    ProductFractional { gamma: f64, a: Vec<f64> },
    /// Density `eta(|w|^2) |w|^gamma` on the graph of `|w|^{2m}` with
    /// `gamma = 2(m-1)/((n+1)m)`.
    RadialPower { n: usize, m: u32 },
    /// The product measure restricted to `2^{-k} < |w_j| <= 2^{-k+1}` for every `j`.
    DyadicPiece { gamma: f64, a: Vec<f64>, k: u32 },
    /// Density `prod_j eta(|w_j|^2) |w_j|^{(z-1) gamma/n}` on the graph of `phi`.
    AnalyticFamily { gamma: f64, a: Vec<f64>, z: Complex64 },
}

/// Density value written as `magnitude * e^{i phase}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Density {
    pub magnitude: f64,
    pub phase: f64,
}

impl Density {
    fn real(v: f64) -> Self {
        Density {
            magnitude: v,
            phase: 0.0,
        }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.magnitude, self.phase)
    }
}

/// `gamma = 2(m-1)/((n+1)m)`.
pub fn radial_gamma(n: usize, m: u32) -> f64 {
    2.0 * (m as f64 - 1.0) / ((n as f64 + 1.0) * m as f64)
}

fn check_product(gamma: f64, a: &[f64]) -> Result<()> {
    if a.is_empty() {
        return Err(Error::invalid("a", "needs one coefficient per plane"));
    }
    let n = a.len() as f64;
    if !(gamma > 0.0 && gamma < 2.0 * n) {
        return Err(Error::invalid("gamma", format!("requires 0 < gamma < {}", 2.0 * n)));
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("a", "coefficients must be finite"));
    }
    Ok(())
}

impl MeasureSpec {
    pub fn product_fractional(gamma: f64, a: Vec<f64>) -> Result<Self> {
        check_product(gamma, &a)?;
        Ok(MeasureSpec::ProductFractional { gamma, a })
    }

    pub fn radial_power(n: usize, m: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "must be at least 1"));
        }
        if m < 2 {
            return Err(Error::invalid("m", "must be at least 2"));
        }
        Ok(MeasureSpec::RadialPower { n, m })
    }

    pub fn dyadic_piece(gamma: f64, a: Vec<f64>, k: u32) -> Result<Self> {
        check_product(gamma, &a)?;
        if k == 0 {
            return Err(Error::invalid("k", "annulus index starts at 1"));
        }
        Ok(MeasureSpec::DyadicPiece { gamma, a, k })
    }

    pub fn analytic_family(gamma: f64, a: Vec<f64>, z: Complex64) -> Result<Self> {
        check_product(gamma, &a)?;
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::invalid("z", "must be finite"));
        }
        Ok(MeasureSpec::AnalyticFamily { gamma, a, z })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MeasureSpec::ProductFractional { gamma, a } => check_product(*gamma, a),
            MeasureSpec::RadialPower { n, m } => Self::radial_power(*n, *m).map(|_| ()),
            MeasureSpec::DyadicPiece { gamma, a, k } => {
                Self::dyadic_piece(*gamma, a.clone(), *k).map(|_| ())
            }
            MeasureSpec::AnalyticFamily { gamma, a, z } => {
                Self::analytic_family(*gamma, a.clone(), *z).map(|_| ())
            }
        }
    }

    pub fn n(&self) -> usize {
        match self {
            MeasureSpec::RadialPower { n, .. } => *n,
            MeasureSpec::ProductFractional { a, .. }
            | MeasureSpec::DyadicPiece { a, .. }
            | MeasureSpec::AnalyticFamily { a, .. } => a.len(),
        }
    }

    pub fn gamma(&self) -> f64 {
        match self {
            MeasureSpec::RadialPower { n, m } => radial_gamma(*n, *m),
            MeasureSpec::ProductFractional { gamma, .. }
            | MeasureSpec::DyadicPiece { gamma, .. }
            | MeasureSpec::AnalyticFamily { gamma, .. } => *gamma,
        }
    }

    /// Per-plane complex exponent `e` in `|w_j|^e` (product variants only).
    fn plane_exponent(&self) -> Option<Complex64> {
        match self {
            MeasureSpec::ProductFractional { gamma, a } | MeasureSpec::DyadicPiece { gamma, a, .. } => {
                Some(Complex64::new(-gamma / a.len() as f64, 0.0))
            }
            MeasureSpec::AnalyticFamily { gamma, a, z } => Some((z - 1.0) * (gamma / a.len() as f64)),
            MeasureSpec::RadialPower { .. } => None,
        }
    }

    /// The radial range `(lo, hi]` of `|w_j|` on the support.
    fn radial_range(&self) -> (f64, f64) {
        match self {
            MeasureSpec::DyadicPiece { k, .. } => {
                let hi = 2f64.powi(1 - *k as i32);
                (0.5 * hi, hi)
            }
            _ => (0.0, 2f64.sqrt()),
        }
    }

    /// `phi(w)`.
    pub fn phi(&self, w: &[f64]) -> f64 {
        let n = w.len() / 2;
        match self {
            MeasureSpec::RadialPower { m, .. } => {
                let s: f64 = w.iter().map(|v| v * v).sum();
                s.powi(*m as i32)
            }
            MeasureSpec::ProductFractional { a, .. }
            | MeasureSpec::DyadicPiece { a, .. }
            | MeasureSpec::AnalyticFamily { a, .. } => (0..n)
                .map(|j| a[j] * (w[j] * w[j] + w[n + j] * w[n + j]))
                .sum(),
        }
    }

    /// `max_j |a_j|` (`1` for the radial measure on its support).
    pub fn max_coefficient(&self) -> f64 {
        match self {
            MeasureSpec::RadialPower { .. } => 1.0,
            MeasureSpec::ProductFractional { a, .. }
            | MeasureSpec::DyadicPiece { a, .. }
            | MeasureSpec::AnalyticFamily { a, .. } => a.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }

    fn plane_factor(&self, r: f64) -> Result<Density> {
        let e = self.plane_exponent().expect("product variant");
        let (lo, hi) = self.radial_range();
        if let MeasureSpec::DyadicPiece { .. } = self {
            if !(r > lo && r <= hi) {
                return Ok(Density::real(0.0));
            }
        }
        let eta = bump(r * r);
        if eta == 0.0 {
            return Ok(Density::real(0.0));
        }
        if r == 0.0 {
            return if e.re < 0.0 || (e.re == 0.0 && e.im != 0.0) {
                Err(Error::SingularPoint)
            } else if e.re == 0.0 {
                Ok(Density::real(eta))
            } else {
                Ok(Density::real(0.0))
            };
        }
        Ok(Density {
            magnitude: eta * r.powf(e.re),
            phase: e.im * r.ln(),
        })
    }
}

fn plane_radii(w: &[f64]) -> Vec<f64> {
    let n = w.len() / 2;
    (0..n).map(|j| w[j].hypot(w[n + j])).collect()
}

/// Density of `spec` at `w in R^{2n}` with respect to Lebesgue measure `dw`.
pub fn measure_density(spec: &MeasureSpec, w: &[f64]) -> Result<Density> {
    spec.validate()?;
    let n = spec.n();
    if w.len() != 2 * n {
        return Err(Error::DimensionMismatch {
            expected: 2 * n,
            found: w.len(),
        });
    }
    if let MeasureSpec::RadialPower { .. } = spec {
        let s: f64 = w.iter().map(|v| v * v).sum();
        return Ok(Density::real(bump(s) * s.powf(0.5 * spec.gamma())));
    }
    let mut out = Density::real(1.0);
    for r in plane_radii(w) {
        let f = spec.plane_factor(r)?;
        out.magnitude *= f.magnitude;
        out.phase += f.phase;
    }
    Ok(out)
}

fn unit_sphere_area(dim: usize) -> f64 {
    // |S^{dim-1}| = 2 pi^{dim/2} / Gamma(dim/2)
    2.0 * PI.powf(dim as f64 / 2.0) / gamma_real(dim as f64 / 2.0).expect("positive")
}

/// Total variation `int |density| dw`.
///
/// Product variants factor over planes into one-dimensional radial integrals;
/// the radial measure reduces to a single radial integral over `R^{2n}`.
pub fn measure_total_variation(spec: &MeasureSpec, quad: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    quad.validate()?;
    let n = spec.n();
    if let MeasureSpec::RadialPower { .. } = spec {
        let g = spec.gamma();
        let dim = 2 * n;
        let radial = integrate_with_breaks(
            |rho: f64| bump(rho * rho) * rho.powf(g + dim as f64 - 1.0),
            &[0.0, 1.0, 2f64.sqrt()],
            quad.tol,
            quad.rel_tol,
            quad.max_subdiv,
        )
        .require(quad.tol.max(quad.rel_tol))?;
        return Ok(unit_sphere_area(dim) * radial.value);
    }
    let e = spec.plane_exponent().expect("product variant").re;
    let (lo, hi) = spec.radial_range();
    let mut breaks = vec![lo];
    if lo < 1.0 && hi > 1.0 {
        breaks.push(1.0);
    }
    breaks.push(hi);
    // r^{1+e} near 0 is smoothed by r = v^2
    let smooth = lo == 0.0;
    let vb: Vec<f64> = if smooth {
        breaks.iter().map(|b| b.sqrt()).collect()
    } else {
        breaks.clone()
    };
    let plane = integrate_with_breaks(
        |v: f64| {
            let (r, jac) = if smooth { (v * v, 2.0 * v) } else { (v, 1.0) };
            if r == 0.0 {
                return 0.0;
            }
            bump(r * r) * r.powf(1.0 + e) * jac
        },
        &vb,
        quad.tol,
        quad.rel_tol,
        quad.max_subdiv,
    );
    let target = quad.target(plane.value.abs());
    let plane = plane.require(target)?;
    Ok((2.0 * PI * plane.value).powi(n as i32))
}

/// A real function on `H^n` for [`convolve_with_measure`].
pub trait Evaluable {
    fn eval(&self, x: &[f64], t: f64) -> f64;

    /// Radius `R` with `f(x, t) = 0` whenever `|x| > R`, if known.
    fn x_support_radius(&self) -> Option<f64> {
        None
    }

    /// `sup |f|`, if known.
    fn sup_norm(&self) -> Option<f64> {
        None
    }
}

/// Adapter turning a closure into an [`Evaluable`].
pub struct FnEvaluable<F> {
    f: F,
    support: Option<f64>,
}

impl<F: Fn(&[f64], f64) -> f64> FnEvaluable<F> {
    pub fn new(f: F) -> Self {
        FnEvaluable { f, support: None }
    }

    pub fn with_support(f: F, radius: f64) -> Self {
        FnEvaluable {
            f,
            support: Some(radius),
        }
    }
}

impl<F: Fn(&[f64], f64) -> f64> Evaluable for FnEvaluable<F> {
    fn eval(&self, x: &[f64], t: f64) -> f64 {
        (self.f)(x, t)
    }

    fn x_support_radius(&self) -> Option<f64> {
        self.support
    }
}

/// Result of a convolution quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvolutionValue {
    pub value: f64,
    pub error: f64,
}

struct Convolver<'a, E: Evaluable + ?Sized> {
    f: &'a E,
    spec: &'a MeasureSpec,
    at: &'a HeisenbergPoint,
    quad: &'a QuadratureSpec,
    n: usize,
    support: Option<f64>,
    exponent: f64,
    ok: std::cell::Cell<bool>,
}

impl<E: Evaluable + ?Sized> Convolver<'_, E> {
    fn leaf(&self, w: &[f64]) -> f64 {
        // w holds (r_1, theta_1, .., r_n, theta_n)
        let n = self.n;
        let mut y = vec![0.0; 2 * n];
        let mut weight = 1.0;
        for j in 0..n {
            let (r, th) = (w[2 * j], w[2 * j + 1]);
            y[j] = r * th.cos();
            y[n + j] = r * th.sin();
            weight *= r;
        }
        let dens = match self.spec {
            MeasureSpec::RadialPower { .. } => {
                let s: f64 = y.iter().map(|v| v * v).sum();
                bump(s) * s.powf(0.5 * self.spec.gamma())
            }
            _ => {
                // the Jacobian r_j is folded into r_j^{1 + e}
                weight = 1.0;
                let mut d = 1.0;
                for j in 0..n {
                    let r = w[2 * j];
                    d *= bump(r * r) * r.powf(1.0 + self.exponent);
                }
                d
            }
        };
        if dens == 0.0 {
            return 0.0;
        }
        let phi = self.spec.phi(&y);
        let b = symplectic_b(&self.at.x, &y).expect("matching dimensions");
        let xs: Vec<f64> = self.at.x.iter().zip(&y).map(|(a, b)| a - b).collect();
        let t = self.at.t - phi - 0.5 * b;
        self.f.eval(&xs, t) * dens * weight
    }

    fn radial_window(&self, j: usize) -> Option<(f64, f64)> {
        let (mut lo, mut hi) = self.spec.radial_range();
        if let Some(rad) = self.support {
            let n = self.n;
            let rho = self.at.x[j].hypot(self.at.x[n + j]);
            lo = lo.max(rho - rad);
            hi = hi.min(rho + rad);
        }
        (hi > lo).then_some((lo, hi))
    }

    fn angular_window(&self, j: usize, r: f64) -> Option<(f64, f64)> {
        let full = Some((0.0, 2.0 * PI));
        let Some(rad) = self.support else { return full };
        let n = self.n;
        let (cx, cy) = (self.at.x[j], self.at.x[n + j]);
        let rho = cx.hypot(cy);
        if rho == 0.0 || r == 0.0 {
            return if r <= rad { full } else { None };
        }
        let kappa = (r * r + rho * rho - rad * rad) / (2.0 * r * rho);
        if kappa <= -1.0 {
            return full;
        }
        if kappa >= 1.0 {
            return None;
        }
        let half = kappa.acos();
        let center = cy.atan2(cx);
        Some((center - half, center + half))
    }

    fn level(&self, depth: usize, w: &mut Vec<f64>, tol: f64) -> f64 {
        if depth == 2 * self.n {
            return self.leaf(w);
        }
        let j = depth / 2;
        let max_subdiv = self.quad.max_subdiv;
        if depth % 2 == 0 {
            let Some((lo, hi)) = self.radial_window(j) else { return 0.0 };
            let mut breaks = vec![lo];
            if lo < 1.0 && hi > 1.0 {
                breaks.push(1.0);
            }
            breaks.push(hi);
            let smooth = lo == 0.0 && self.exponent < 0.0;
            let inner_tol = tol / (4.0 * (hi - lo));
            let est = if smooth {
                let vb: Vec<f64> = breaks.iter().map(|b| b.sqrt()).collect();
                integrate_with_breaks(
                    |v: f64| {
                        let mut ww = w.clone();
                        ww.push(v * v);
                        2.0 * v * self.level(depth + 1, &mut ww, inner_tol)
                    },
                    &vb,
                    tol,
                    self.quad.rel_tol,
                    max_subdiv,
                )
            } else {
                integrate_with_breaks(
                    |r: f64| {
                        let mut ww = w.clone();
                        ww.push(r);
                        self.level(depth + 1, &mut ww, inner_tol)
                    },
                    &breaks,
                    tol,
                    self.quad.rel_tol,
                    max_subdiv,
                )
            };
            if !est.converged {
                self.ok.set(false);
            }
            est.value
        } else {
            let r = w[depth - 1];
            let Some((a, b)) = self.angular_window(j, r) else { return 0.0 };
            let inner_tol = tol / (4.0 * (b - a));
            let est = integrate_with_breaks(
                |th: f64| {
                    let mut ww = w.clone();
                    ww.push(th);
                    self.level(depth + 1, &mut ww, inner_tol)
                },
                &[a, b],
                tol,
                self.quad.rel_tol,
                max_subdiv,
            );
            if !est.converged {
                self.ok.set(false);
            }
            est.value
        }
    }
}

/// `(f * mu)(x, t)` by nested adaptive quadrature in per-plane polar
/// coordinates `w_j = r_j (cos theta_j, sin theta_j)`.
///
/// The factor `r_j^{1 - gamma/n}` is integrable; when its exponent is negative
/// the radial variable is further written `r = v^2`. If `f` reports an
/// `x`-support radius the polar domain is clipped to the disc it allows in each plane.
pub fn convolve_with_measure<E: Evaluable + ?Sized>(
    f: &E,
    spec: &MeasureSpec,
    at: &HeisenbergPoint,
    quad: &QuadratureSpec,
) -> Result<ConvolutionValue> {
    spec.validate()?;
    quad.validate()?;
    let n = spec.n();
    if at.x.len() != 2 * n {
        return Err(Error::DimensionMismatch {
            expected: 2 * n,
            found: at.x.len(),
        });
    }
    if let MeasureSpec::AnalyticFamily { .. } = spec {
        return Err(Error::Unsupported(
            "convolution with a complex density; use measure_density for its phase".into(),
        ));
    }
    let exponent = spec.plane_exponent().map(|e| e.re).unwrap_or(0.0);
    let conv = Convolver {
        f,
        spec,
        at,
        quad,
        n,
        support: f.x_support_radius(),
        exponent,
        ok: std::cell::Cell::new(true),
    };
    let mut w = Vec::with_capacity(2 * n);
    let value = conv.level(0, &mut w, quad.tol);
    if !value.is_finite() {
        return Err(Error::NonFinite("convolve_with_measure"));
    }
    if !conv.ok.get() {
        return Err(Error::ToleranceNotMet {
            estimate: value,
            error: f64::NAN,
            tolerance: quad.tol,
        });
    }
    Ok(ConvolutionValue {
        value,
        error: quad.tol,
    })
}

/// Samples of a function at the cell centres of a box in `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxGrid {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub shape: Vec<usize>,
    /// Row-major values, last axis fastest.
    pub values: Vec<f64>,
}

impl BoxGrid {
    /// Sample `f` at cell centres.
    pub fn sample<F: FnMut(&[f64]) -> f64>(
        lower: Vec<f64>,
        upper: Vec<f64>,
        shape: Vec<usize>,
        mut f: F,
    ) -> Result<Self> {
        if lower.len() != upper.len() || lower.len() != shape.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: shape.len(),
            });
        }
        let total: usize = shape.iter().product();
        let mut values = Vec::with_capacity(total);
        let mut point = vec![0.0; shape.len()];
        for idx in 0..total {
            let mut rem = idx;
            for d in (0..shape.len()).rev() {
                let i = rem % shape[d];
                rem /= shape[d];
                let h = (upper[d] - lower[d]) / shape[d] as f64;
                point[d] = lower[d] + (i as f64 + 0.5) * h;
            }
            values.push(f(&point));
        }
        Ok(BoxGrid {
            lower,
            upper,
            shape,
            values,
        })
    }

    pub fn cell_volume(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .zip(&self.shape)
            .map(|((a, b), s)| (b - a) / *s as f64)
            .product()
    }
}

/// Riemann-sum `L^q` norm `(sum |v|^q cellvol)^{1/q}`; `q = inf` gives the max.
pub fn lq_norm(grid: &BoxGrid, q: f64) -> Result<f64> {
    if grid.values.is_empty() {
        return Err(Error::invalid("grid", "no samples"));
    }
    if !(q >= 1.0) {
        return Err(Error::invalid("q", "must be at least 1"));
    }
    if q.is_infinite() {
        return Ok(grid.values.iter().fold(0.0, |m, v| m.max(v.abs())));
    }
    let peak = grid.values.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    if peak == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = grid.values.iter().map(|v| (v.abs() / peak).powf(q)).sum();
    Ok(peak * (sum * grid.cell_volume()).powf(1.0 / q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: &[f64], t: f64) -> HeisenbergPoint {
        HeisenbergPoint::new(x.to_vec(), t).unwrap()
    }

    #[test]
    fn group_law_examples() {
        let p = group_mul(&pt(&[1.0, 0.0], 0.0), &pt(&[0.0, 1.0], 0.0)).unwrap();
        assert_eq!(p, pt(&[1.0, 1.0], 0.5));
        let q = pt(&[0.3, -1.2, 2.0, 0.7], 1.5);
        assert_eq!(group_mul(&q, &HeisenbergPoint::identity(2)).unwrap(), q);
        let e = group_mul(&q, &group_inv(&q)).unwrap();
        assert!(e.x.iter().all(|v| v.abs() < 1e-15) && e.t.abs() < 1e-15);
    }

    #[test]
    fn dimension_checks() {
        assert!(HeisenbergPoint::new(vec![1.0], 0.0).is_err());
        assert!(matches!(
            group_mul(&pt(&[1.0, 0.0], 0.0), &pt(&[0.0, 1.0, 0.0, 0.0], 0.0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn density_examples() {
        let pf = MeasureSpec::product_fractional(1.0, vec![1.0]).unwrap();
        assert_eq!(measure_density(&pf, &[0.5, 0.0]).unwrap().magnitude, 2.0);
        assert_eq!(measure_density(&pf, &[0.0, 0.0]), Err(Error::SingularPoint));

        let dy = MeasureSpec::dyadic_piece(1.0, vec![1.0], 2).unwrap();
        // annulus 1/4 < |w_1| <= 1/2
        assert_eq!(measure_density(&dy, &[0.6, 0.0]).unwrap().magnitude, 0.0);
        assert_eq!(measure_density(&dy, &[0.2, 0.0]).unwrap().magnitude, 0.0);
        assert_eq!(measure_density(&dy, &[0.25, 0.0]).unwrap().magnitude, 0.0);
        assert!(measure_density(&dy, &[0.3, 0.0]).unwrap().magnitude > 0.0);
        assert!(measure_density(&dy, &[0.0, 0.5]).unwrap().magnitude > 0.0);

        let rp = MeasureSpec::radial_power(1, 2).unwrap();
        assert!((rp.gamma() - 0.5).abs() < 1e-16);
        let d = measure_density(&rp, &[0.8, 0.0]).unwrap().magnitude;
        assert!((d - 0.8f64.sqrt()).abs() < 1e-15);

        let af = MeasureSpec::analytic_family(1.0, vec![0.0], Complex64::new(0.0, 2.0)).unwrap();
        let d = measure_density(&af, &[0.5, 0.0]).unwrap();
        // |w|^{(z-1)} = 0.5^{-1 + 2i}
        assert!((d.magnitude - 2.0).abs() < 1e-14);
        assert!((d.phase - 2.0 * 0.5f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn total_variation_examples() {
        let quad = QuadratureSpec::default();
        let dy = MeasureSpec::dyadic_piece(1.0, vec![1.0], 3).unwrap();
        let tv = measure_total_variation(&dy, &quad).unwrap();
        assert!((tv - 2.0 * PI / 8.0).abs() < 1e-13);
        let small = MeasureSpec::dyadic_piece(1e-9, vec![0.0], 4).unwrap();
        let big = MeasureSpec::dyadic_piece(1e-9, vec![0.0], 3).unwrap();
        let ratio = measure_total_variation(&small, &quad).unwrap() / measure_total_variation(&big, &quad).unwrap();
        assert!((ratio - 0.25).abs() < 1e-8);
    }

    #[test]
    fn constant_function_gives_total_variation() {
        let quad = QuadratureSpec {
            tol: 1e-10,
            ..Default::default()
        };
        let spec = MeasureSpec::product_fractional(1.0, vec![1.0]).unwrap();
        let one = FnEvaluable::new(|_: &[f64], _: f64| 1.0);
        let v = convolve_with_measure(&one, &spec, &pt(&[0.2, -0.1], 0.3), &quad).unwrap();
        let tv = measure_total_variation(&spec, &quad).unwrap();
        assert!((v.value - tv).abs() < 1e-8, "{} vs {}", v.value, tv);
    }

    #[test]
    fn lq_norm_examples() {
        let g = BoxGrid::sample(vec![0.0, 0.0], vec![1.0, 2.0], vec![4, 4], |p| {
            if p[0] < 0.25 && p[1] < 0.5 {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        let cell = g.cell_volume();
        assert!((lq_norm(&g, 3.0).unwrap() - cell.powf(1.0 / 3.0)).abs() < 1e-15);
        let mut h = g.clone();
        h.values.iter_mut().for_each(|v| *v *= 5.0);
        assert!((lq_norm(&h, 2.0).unwrap() - 5.0 * lq_norm(&g, 2.0).unwrap()).abs() < 1e-14);
        assert!(lq_norm(&g, 0.5).is_err());
    }
}
