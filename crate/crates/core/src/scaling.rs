//! Scaling experiments with the box test functions `f_delta = 1_{Q_delta}`.
//!
//! `Q_delta = D_delta x [-(4M+n) delta^2, (4M+n) delta^2]` and
//! `A_delta = {x in D_{delta/2}, |t - phi(x)| <= 2 M delta^2}`, with `D_r` the ball
//! of radius `r` in `R^{2n}` and `M = max |a_j|`.
//!
//! For `n = 1` the measure is rotation invariant in the plane, so
//! `(f_delta * mu)(x, t)` depends on `|x|` and `t` only. Its value is a radial
//! integral of an exactly computed angular measure. Norms reduce to one radial
//! variable, and the `t` direction is integrated exactly by a sweep over box edges.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heisenberg::{convolve_with_measure, Evaluable, HeisenbergPoint, MeasureSpec};
use crate::quad::{integrate_with_breaks, kronrod_nodes, QuadratureSpec};
use crate::special_fn::{bump, gamma_real};
use crate::type_set::{vertex_d, Coord, TypePoint};

/// Parameters of the box family at one scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestBoxFamily {
    pub n: usize,
    pub a: Vec<f64>,
    pub delta: f64,
}

impl TestBoxFamily {
    pub fn new(a: Vec<f64>, delta: f64) -> Result<Self> {
        if a.is_empty() || a.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("a", "needs one finite coefficient per plane"));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::invalid("delta", "must lie in (0, 1)"));
        }
        Ok(TestBoxFamily { n: a.len(), a, delta })
    }

    /// `M = max_j |a_j|`.
    pub fn m(&self) -> f64 {
        self.a.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Half height `(4M + n) delta^2` of `Q_delta`.
    pub fn t_half_width(&self) -> f64 {
        (4.0 * self.m() + self.n as f64) * self.delta * self.delta
    }

    pub fn phi(&self, x: &[f64]) -> f64 {
        self.a
            .iter()
            .enumerate()
            .map(|(j, aj)| aj * (x[2 * j] * x[2 * j] + x[2 * j + 1] * x[2 * j + 1]))
            .sum()
    }

    pub fn in_q(&self, x: &[f64], t: f64) -> bool {
        norm_sq(x) <= self.delta * self.delta && t.abs() <= self.t_half_width()
    }

    pub fn in_a(&self, x: &[f64], t: f64) -> bool {
        let r = 0.5 * self.delta;
        norm_sq(x) <= r * r && (t - self.phi(x)).abs() <= 2.0 * self.m() * self.delta * self.delta
    }

    /// `|Q_delta| = |B^{2n}| delta^{2n} 2 (4M+n) delta^2`.
    pub fn q_volume(&self) -> f64 {
        let d = 2 * self.n;
        let ball = PI.powf(self.n as f64) / gamma_real(self.n as f64 + 1.0).expect("positive");
        ball * self.delta.powi(d as i32) * 2.0 * self.t_half_width()
    }
}

fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// The indicator `1_{Q_delta}`.
#[derive(Debug, Clone)]
pub struct BoxIndicator {
    fam: TestBoxFamily,
}

impl Evaluable for BoxIndicator {
    fn eval(&self, x: &[f64], t: f64) -> f64 {
        if self.fam.in_q(x, t) {
            1.0
        } else {
            0.0
        }
    }

    fn x_support_radius(&self) -> Option<f64> {
        Some(self.fam.delta)
    }

    fn sup_norm(&self) -> Option<f64> {
        Some(1.0)
    }
}

pub fn fdelta_indicator(fam: &TestBoxFamily) -> BoxIndicator {
    BoxIndicator { fam: fam.clone() }
}

/// Measure of `{psi in (-pi, pi]: cos psi >= c, lo <= sin psi <= hi}`.
fn arc_measure(c: f64, lo: f64, hi: f64) -> f64 {
    if c > 1.0 || lo > 1.0 || hi < -1.0 || lo > hi {
        return 0.0;
    }
    let alpha = if c <= -1.0 { PI } else { c.acos() };
    let wrap = |p: f64| if p > PI { p - 2.0 * PI } else { p };
    let mut cuts = vec![-PI, PI, -alpha, alpha];
    for s in [lo, hi] {
        if s.abs() <= 1.0 {
            let b = s.asin();
            cuts.push(b);
            cuts.push(wrap(PI - b));
        }
    }
    cuts.sort_by(f64::total_cmp);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (p, q) = (w[0], w[1]);
        if q <= p {
            continue;
        }
        let mid = 0.5 * (p + q);
        let s = mid.sin();
        if mid.cos() >= c && s >= lo && s <= hi {
            total += q - p;
        }
    }
    total
}

fn push_roots(a: f64, b: f64, c: f64, out: &mut Vec<f64>) {
    // a r^2 + b r + c = 0
    if a == 0.0 {
        if b != 0.0 {
            out.push(-c / b);
        }
        return;
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return;
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    if q != 0.0 {
        out.push(q / a);
        out.push(c / q);
    } else {
        out.push(0.0);
    }
}

/// `(f_delta * mu)(x, t)` for `n = 1` with `|x| = rho`.
///
/// Angular measure is exact; the radial integral is adaptive with
/// breakpoints wherever the arc structure changes.
pub fn box_convolution_plane(
    fam: &TestBoxFamily,
    gamma: f64,
    rho: f64,
    t: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if fam.n != 1 {
        return Err(Error::Unsupported("exact-arc convolution needs n = 1".into()));
    }
    if !(gamma > 0.0 && gamma < 2.0) {
        return Err(Error::invalid("gamma", "requires 0 < gamma < 2"));
    }
    let a = fam.a[0];
    let d = fam.delta;
    let h = fam.t_half_width();
    let rho = rho.abs();
    let r_lo = (rho - d).max(0.0);
    let r_hi = (rho + d).min(2f64.sqrt());
    if r_lo >= r_hi {
        return Ok(0.0);
    }
    let angular = |r: f64| -> f64 {
        if rho == 0.0 || r == 0.0 {
            let disc_ok = if rho == 0.0 { r <= d } else { rho <= d };
            return if disc_ok && (t - a * r * r).abs() <= h { 2.0 * PI } else { 0.0 };
        }
        let c = (rho * rho + r * r - d * d) / (2.0 * rho * r);
        let lo = 2.0 * (t - a * r * r - h) / (rho * r);
        let hi = 2.0 * (t - a * r * r + h) / (rho * r);
        arc_measure(c, lo, hi)
    };
    let mut breaks = vec![r_lo, r_hi, (d - rho).abs(), 1.0];
    let mut roots = Vec::new();
    for s in [-1.0, 1.0] {
        for e in [-h, h] {
            push_roots(a, s * 0.5 * rho, -(t + e), &mut roots);
        }
    }
    // all-or-nothing thresholds at the origin-centred case
    if a != 0.0 {
        for e in [-h, h] {
            let v = (t + e) / a;
            if v > 0.0 {
                roots.push(v.sqrt());
            }
        }
    }
    breaks.extend(roots);
    breaks.retain(|b| b.is_finite() && *b >= r_lo && *b <= r_hi);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let expo = 1.0 - gamma;
    let est = if r_lo == 0.0 {
        // r = v^2 tames r^{1 - gamma}
        let vb: Vec<f64> = breaks.iter().map(|b| b.sqrt()).collect();
        integrate_with_breaks(
            |v: f64| {
                let r = v * v;
                if r == 0.0 {
                    return 0.0;
                }
                2.0 * v * r.powf(expo) * bump(r * r) * angular(r)
            },
            &vb,
            quad.tol,
            quad.rel_tol,
            quad.max_subdiv,
        )
    } else {
        integrate_with_breaks(
            |r: f64| r.powf(expo) * bump(r * r) * angular(r),
            &breaks,
            quad.tol,
            quad.rel_tol,
            quad.max_subdiv,
        )
    };
    let target = quad.target(est.value.abs());
    Ok(est.require(target)?.value)
}

/// `(f_delta * mu)(x, t)` for the product measure, any `n`.
pub fn box_convolution(
    fam: &TestBoxFamily,
    gamma: f64,
    x: &[f64],
    t: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if x.len() != 2 * fam.n {
        return Err(Error::DimensionMismatch {
            expected: 2 * fam.n,
            found: x.len(),
        });
    }
    if fam.n == 1 {
        return box_convolution_plane(fam, gamma, norm_sq(x).sqrt(), t, quad);
    }
    let spec = MeasureSpec::product_fractional(gamma, fam.a.clone())?;
    let at = HeisenbergPoint::new(x.to_vec(), t)?;
    Ok(convolve_with_measure(&fdelta_indicator(fam), &spec, &at, quad)?.value)
}

/// Least-squares line through log-log samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub samples: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
}

impl SlopeFit {
    pub fn fit(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 4 {
            return Err(Error::invalid("samples", "a slope fit needs at least 4 samples"));
        }
        if samples.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::NonFinite("slope fit sample"));
        }
        let k = samples.len() as f64;
        let mx = samples.iter().map(|s| s.0).sum::<f64>() / k;
        let my = samples.iter().map(|s| s.1).sum::<f64>() / k;
        let sxx: f64 = samples.iter().map(|s| (s.0 - mx).powi(2)).sum();
        if sxx == 0.0 {
            return Err(Error::invalid("samples", "abscissae are all equal"));
        }
        let sxy: f64 = samples.iter().map(|s| (s.0 - mx) * (s.1 - my)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let max_residual = samples
            .iter()
            .map(|s| (s.1 - intercept - slope * s.0).abs())
            .fold(0.0, f64::max);
        Ok(SlopeFit {
            samples,
            slope,
            intercept,
            max_residual,
        })
    }
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Quasi-random points of `A_delta`: the centre, the two extreme-`t` points
/// above it, then Halton points starting at index `seed + 1`.
pub fn sample_a_delta(fam: &TestBoxFamily, count: usize, seed: u64) -> Result<Vec<(Vec<f64>, f64)>> {
    let dim = 2 * fam.n;
    if dim + 1 > PRIMES.len() {
        return Err(Error::Unsupported(format!("sampling in dimension {}", dim + 1)));
    }
    let band = 2.0 * fam.m() * fam.delta * fam.delta;
    let radius = 0.5 * fam.delta;
    let mut out = vec![(vec![0.0; dim], 0.0), (vec![0.0; dim], band), (vec![0.0; dim], -band)];
    out.truncate(count);
    let mut idx = seed;
    while out.len() < count {
        idx += 1;
        let v: Vec<f64> = (0..dim).map(|d| 2.0 * radical_inverse(idx, PRIMES[d]) - 1.0).collect();
        if norm_sq(&v) > 1.0 {
            continue;
        }
        let x: Vec<f64> = v.iter().map(|c| c * radius).collect();
        let s = 2.0 * radical_inverse(idx, PRIMES[dim]) - 1.0;
        let t = fam.phi(&x) + band * s;
        out.push((x, t));
    }
    Ok(out)
}

/// Minimum of `f_delta * mu` over sampled points of `A_delta` at one scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundRow {
    pub delta: f64,
    pub min_value: f64,
    pub argmin_x: Vec<f64>,
    pub argmin_t: f64,
    pub center_value: f64,
}

pub fn lower_bound_row(
    fam: &TestBoxFamily,
    gamma: f64,
    sample_count: usize,
    seed: u64,
    quad: &QuadratureSpec,
) -> Result<LowerBoundRow> {
    if sample_count == 0 {
        return Err(Error::invalid("sample_count", "must be positive"));
    }
    let pts = sample_a_delta(fam, sample_count, seed)?;
    let mut best: Option<(f64, &(Vec<f64>, f64))> = None;
    let mut center = f64::NAN;
    for (i, p) in pts.iter().enumerate() {
        let v = box_convolution(fam, gamma, &p.0, p.1, quad)?;
        if i == 0 {
            center = v;
        }
        if best.map_or(true, |(b, _)| v < b) {
            best = Some((v, p));
        }
    }
    let (min_value, arg) = best.expect("non-empty sample");
    Ok(LowerBoundRow {
        delta: fam.delta,
        min_value,
        argmin_x: arg.0.clone(),
        argmin_t: arg.1,
        center_value: center,
    })
}

/// Rows plus the fitted slope of `ln min` against `ln delta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub rows: Vec<LowerBoundRow>,
    pub fit: SlopeFit,
    pub predicted: f64,
}

fn check_deltas(deltas: &[f64]) -> Result<()> {
    if deltas.iter().any(|d| !(*d > 0.0 && *d < 0.5)) {
        return Err(Error::invalid("deltas", "each delta must lie in (0, 1/2)"));
    }
    Ok(())
}

pub fn lower_bound_experiment(
    gamma: f64,
    a: &[f64],
    deltas: &[f64],
    sample_count: usize,
    seed: u64,
    quad: &QuadratureSpec,
) -> Result<LowerBoundReport> {
    check_deltas(deltas)?;
    let rows = deltas
        .iter()
        .map(|&d| lower_bound_row(&TestBoxFamily::new(a.to_vec(), d)?, gamma, sample_count, seed, quad))
        .collect::<Result<Vec<_>>>()?;
    lower_bound_report(a.len(), gamma, rows)
}

pub fn lower_bound_report(n: usize, gamma: f64, rows: Vec<LowerBoundRow>) -> Result<LowerBoundReport> {
    let fit = SlopeFit::fit(rows.iter().map(|r| (r.delta.ln(), r.min_value.ln())).collect())?;
    Ok(LowerBoundReport {
        rows,
        fit,
        predicted: 2.0 * n as f64 - gamma,
    })
}

/// Resolution of the norm computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormGrid {
    /// Midpoint cells per `delta` in `|x|`.
    pub rho_cells_per_delta: usize,
    /// 21-point panels per radial segment of the `w` discretisation.
    pub r_panels: usize,
    /// 21-point panels across each angular arc.
    pub theta_panels: usize,
}

impl Default for NormGrid {
    fn default() -> Self {
        NormGrid {
            rho_cells_per_delta: 16,
            r_panels: 2,
            theta_panels: 2,
        }
    }
}

/// `||f_delta * mu||_q` at one scale, with any resolution warning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormRow {
    pub delta: f64,
    pub norm: f64,
    pub warning: Option<String>,
}

/// Weighted `t`-centres of the boxes making up `(f_delta * mu)((rho, 0), .)`.
fn box_centres(fam: &TestBoxFamily, gamma: f64, rho: f64, grid: &NormGrid) -> Vec<(f64, f64)> {
    let a = fam.a[0];
    let d = fam.delta;
    let r_lo = (rho - d).max(0.0);
    let r_hi = (rho + d).min(2f64.sqrt());
    let mut out = Vec::new();
    if r_lo >= r_hi {
        return out;
    }
    let mut segs = vec![r_lo];
    if d - rho > r_lo && d - rho < r_hi {
        segs.push(d - rho);
    }
    segs.push(r_hi);
    let expo = 1.0 - gamma;
    for s in segs.windows(2) {
        let (s0, s1) = (s[0], s[1]);
        let from_zero = s0 == 0.0;
        // r = s1 v^2 on a segment touching 0
        let (v0, v1) = if from_zero { (0.0, 1.0) } else { (s0, s1) };
        let pw = (v1 - v0) / grid.r_panels as f64;
        for p in 0..grid.r_panels {
            for (v, wv) in kronrod_nodes(v0 + p as f64 * pw, v0 + (p + 1) as f64 * pw) {
                let (r, jac) = if from_zero { (s1 * v * v, 2.0 * s1 * v) } else { (v, 1.0) };
                let weight_r = wv * jac * r.powf(expo) * bump(r * r);
                if weight_r == 0.0 {
                    continue;
                }
                let alpha = if rho == 0.0 {
                    PI
                } else {
                    let c = (rho * rho + r * r - d * d) / (2.0 * rho * r);
                    if c >= 1.0 {
                        continue;
                    }
                    if c <= -1.0 {
                        PI
                    } else {
                        c.acos()
                    }
                };
                let tw = 2.0 * alpha / grid.theta_panels as f64;
                for q in 0..grid.theta_panels {
                    for (th, wt) in kronrod_nodes(-alpha + q as f64 * tw, -alpha + (q + 1) as f64 * tw) {
                        let centre = a * r * r + 0.5 * rho * r * th.sin();
                        out.push((centre, weight_r * wt));
                    }
                }
            }
        }
    }
    out
}

/// `int F^q dt` (or `sup F` for `q = inf`) of a sum of boxes of half width `h`.
fn sweep(centres: &[(f64, f64)], h: f64, q: f64) -> f64 {
    let mut events: Vec<(f64, f64)> = Vec::with_capacity(2 * centres.len());
    for &(c, w) in centres {
        events.push((c - h, w));
        events.push((c + h, -w));
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)));
    let mut level = 0.0f64;
    let mut acc = 0.0;
    let mut peak = 0.0f64;
    for pair in events.windows(2) {
        level += pair[0].1;
        let f = level.max(0.0);
        peak = peak.max(f);
        if q.is_finite() {
            acc += f.powf(q) * (pair[1].0 - pair[0].0);
        }
    }
    if q.is_finite() {
        acc
    } else {
        peak
    }
}

/// `||f_delta * mu||_q` for `n = 1` by midpoint cells in `|x|` and an exact
/// `t` sweep. Warns when the cell width exceeds `delta / 8`.
pub fn norm_row(fam: &TestBoxFamily, gamma: f64, q: f64, grid: &NormGrid) -> Result<NormRow> {
    if fam.n != 1 {
        return Err(Error::Unsupported("norm experiment needs n = 1".into()));
    }
    if !(q >= 1.0) {
        return Err(Error::invalid("q", "must be at least 1"));
    }
    if !(gamma > 0.0 && gamma < 2.0) {
        return Err(Error::invalid("gamma", "requires 0 < gamma < 2"));
    }
    if grid.rho_cells_per_delta == 0 || grid.r_panels == 0 || grid.theta_panels == 0 {
        return Err(Error::invalid("grid", "resolution counts must be positive"));
    }
    let d = fam.delta;
    let h = fam.t_half_width();
    let cell = d / grid.rho_cells_per_delta as f64;
    let warning = (cell > d / 8.0).then(|| {
        format!("grid resolution insufficient: cell {cell:.3e} exceeds delta/8 = {:.3e}", d / 8.0)
    });
    let rho_max = 2f64.sqrt() + d;
    let cells = (rho_max / cell).ceil() as usize;
    let mut total = 0.0;
    let mut peak = 0.0f64;
    for i in 0..cells {
        let rho = (i as f64 + 0.5) * cell;
        let centres = box_centres(fam, gamma, rho, grid);
        if centres.is_empty() {
            continue;
        }
        let v = sweep(&centres, h, q);
        if q.is_finite() {
            total += 2.0 * PI * rho * cell * v;
        } else {
            peak = peak.max(v);
        }
    }
    let norm = if q.is_finite() { total.powf(1.0 / q) } else { peak };
    if !norm.is_finite() {
        return Err(Error::NonFinite("norm_row"));
    }
    Ok(NormRow {
        delta: d,
        norm,
        warning,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub rows: Vec<NormRow>,
    pub fit: SlopeFit,
    pub predicted: f64,
}

/// Predicted exponent `2n - gamma + (2n+2)/q`.
pub fn predicted_norm_slope(n: usize, gamma: f64, q: f64) -> f64 {
    let tail = if q.is_finite() { (2.0 * n as f64 + 2.0) / q } else { 0.0 };
    2.0 * n as f64 - gamma + tail
}

pub fn norm_scaling_experiment(
    gamma: f64,
    a: &[f64],
    q: f64,
    deltas: &[f64],
    grid: &NormGrid,
) -> Result<NormReport> {
    check_deltas(deltas)?;
    let rows = deltas
        .iter()
        .map(|&d| norm_row(&TestBoxFamily::new(a.to_vec(), d)?, gamma, q, grid))
        .collect::<Result<Vec<_>>>()?;
    norm_report(a.len(), gamma, q, rows)
}

pub fn norm_report(n: usize, gamma: f64, q: f64, rows: Vec<NormRow>) -> Result<NormReport> {
    let fit = SlopeFit::fit(rows.iter().map(|r| (r.delta.ln(), r.norm.ln())).collect())?;
    Ok(NormReport {
        rows,
        fit,
        predicted: predicted_norm_slope(n, gamma, q),
    })
}

/// `||f_delta||_p = |Q_delta|^{1/p}`.
pub fn fdelta_lp_norm(fam: &TestBoxFamily, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::invalid("p", "must be at least 1"));
    }
    Ok(if p.is_infinite() { 1.0 } else { fam.q_volume().powf(1.0 / p) })
}

/// Total variation of the `k`-th dyadic piece in closed form: each plane
/// contributes `2 pi int_{2^{-k}}^{2^{1-k}} r^{1 - gamma/n} dr` (the bump is 1 there).
pub fn dyadic_tv(n: usize, gamma: f64, k: u32) -> Result<f64> {
    if n == 0 || !(gamma > 0.0 && gamma < 2.0 * n as f64) {
        return Err(Error::invalid("gamma", "requires n >= 1 and 0 < gamma < 2n"));
    }
    if !(1..=20).contains(&k) {
        return Err(Error::invalid("k", "must lie in 1..=20"));
    }
    let e = 2.0 - gamma / n as f64;
    let lo = 2f64.powi(-(k as i32));
    let plane = 2.0 * PI * lo.powf(e) * (2f64.powf(e) - 1.0) / e;
    Ok(plane.powi(n as i32))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DyadicReport {
    pub rows: Vec<(u32, f64)>,
    pub fit: SlopeFit,
    pub predicted: f64,
}

/// Fit of `log2 TV(mu_k)` against `k`; the prediction is `-(2n - gamma)`.
pub fn dyadic_tv_slope(n: usize, gamma: f64, ks: &[u32]) -> Result<DyadicReport> {
    let rows = ks
        .iter()
        .map(|&k| Ok((k, dyadic_tv(n, gamma, k)?)))
        .collect::<Result<Vec<_>>>()?;
    let fit = SlopeFit::fit(rows.iter().map(|(k, tv)| (*k as f64, tv.log2())).collect())?;
    Ok(DyadicReport {
        rows,
        fit,
        predicted: -(2.0 * n as f64 - gamma),
    })
}

/// Interpolation landmarks on the `D`-edge.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationPoints<T> {
    pub theta: T,
    pub d_point: TypePoint<T>,
    pub tau_point: TypePoint<T>,
    pub dual_tau_point: TypePoint<T>,
}

/// `theta = gamma/(2n)`; `(1-theta) C + theta (1,1)` with
/// `C = ((2n+1)/(2n+2), 1/(2n+2))`; the `tau` point `(1-tau) D + tau (1,1)`
/// and its dual `(1 - 1/q, 1 - 1/p)`.
pub fn interpolation_points<T: Coord>(n: u32, gamma: &T, tau: &T) -> Result<InterpolationPoints<T>> {
    if !(*tau > T::zero() && *tau < T::one()) {
        return Err(Error::invalid("tau", "must lie in (0, 1)"));
    }
    let theta = crate::type_set::interpolation_theta(n, gamma)?;
    let c = crate::type_set::triangle_vertex::<T>(n);
    let comb = |w: &T, p: &TypePoint<T>| TypePoint {
        inv_p: (T::one() - w.clone()) * p.inv_p.clone() + w.clone(),
        inv_q: (T::one() - w.clone()) * p.inv_q.clone() + w.clone(),
    };
    let d_point = comb(&theta, &c);
    let d = vertex_d(n, gamma)?;
    let tau_point = comb(tau, &d);
    let dual_tau_point = tau_point.dual();
    Ok(InterpolationPoints {
        theta,
        d_point,
        tau_point,
        dual_tau_point,
    })
}

/// `sum_{k >= 1} 2^{-k (2n - gamma) tau} = r / (1 - r)` with `r = 2^{-(2n-gamma) tau}`.
pub fn dyadic_series_closed(n: usize, gamma: f64, tau: f64) -> Result<f64> {
    let e = (2.0 * n as f64 - gamma) * tau;
    if !(e > 0.0) {
        return Err(Error::invalid("tau", "the series diverges unless (2n - gamma) tau > 0"));
    }
    let r = 2f64.powf(-e);
    Ok(r / (1.0 - r))
}

/// Partial sum up to `k = terms`.
pub fn dyadic_series_partial(n: usize, gamma: f64, tau: f64, terms: u32) -> f64 {
    let e = (2.0 * n as f64 - gamma) * tau;
    let mut sum = crate::quad::CompensatedSum::new();
    for k in 1..=terms {
        sum.add(2f64.powf(-(k as f64) * e));
    }
    sum.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::new(1e-12, 4000, 0.0).unwrap().with_rel_tol(1e-9)
    }

    #[test]
    fn box_volume() {
        let fam = TestBoxFamily::new(vec![1.0], 0.25).unwrap();
        assert!((fam.q_volume() - 10.0 * PI * 0.25f64.powi(4)).abs() < 1e-15);
        let f = fdelta_indicator(&fam);
        assert_eq!(f.eval(&[0.0, 0.0], 0.0), 1.0);
        assert_eq!(f.eval(&[0.3, 0.0], 0.0), 0.0);
    }

    #[test]
    fn arc_measure_cases() {
        assert!((arc_measure(-2.0, -2.0, 2.0) - 2.0 * PI).abs() < 1e-15);
        assert!((arc_measure(0.0, -2.0, 2.0) - PI).abs() < 1e-15);
        assert!((arc_measure(-2.0, 0.0, 2.0) - PI).abs() < 1e-15);
        assert!((arc_measure(0.0, 0.0, 2.0) - PI / 2.0).abs() < 1e-15);
        assert_eq!(arc_measure(2.0, -1.0, 1.0), 0.0);
    }

    #[test]
    fn centre_value() {
        for (gamma, d) in [(1.0, 0.25), (1.5, 0.125)] {
            let fam = TestBoxFamily::new(vec![1.0], d).unwrap();
            let v = box_convolution_plane(&fam, gamma, 0.0, 0.0, &quad()).unwrap();
            let expect = 2.0 * PI * d.powf(2.0 - gamma) / (2.0 - gamma);
            assert!((v - expect).abs() < 1e-9 * expect, "{v} {expect}");
        }
    }

    #[test]
    fn plane_route_matches_generic_convolution() {
        let fam = TestBoxFamily::new(vec![1.0], 0.25).unwrap();
        let q = QuadratureSpec::new(1e-7, 20_000, 0.0).unwrap().with_rel_tol(1e-6);
        let spec = MeasureSpec::product_fractional(1.0, vec![1.0]).unwrap();
        for (x, t) in [([0.1, 0.05], 0.02), ([0.3, -0.2], 0.1)] {
            let exact = box_convolution_plane(&fam, 1.0, norm_sq(&x).sqrt(), t, &quad()).unwrap();
            let at = HeisenbergPoint::new(x.to_vec(), t).unwrap();
            let gen = convolve_with_measure(&fdelta_indicator(&fam), &spec, &at, &q).unwrap();
            assert!((exact - gen.value).abs() < 1e-4 * exact, "{exact} {}", gen.value);
        }
    }

    #[test]
    fn sweep_mass_and_norm() {
        let fam = TestBoxFamily::new(vec![1.0], 0.25).unwrap();
        let c = box_centres(&fam, 1.0, 0.4, &NormGrid::default());
        let mass: f64 = c.iter().map(|p| p.1).sum();
        let h = fam.t_half_width();
        assert!((sweep(&c, h, 1.0) - 2.0 * h * mass).abs() < 1e-12 * mass);
        assert!(sweep(&[(0.0, 2.0)], 0.5, 2.0) - 4.0 < 1e-15);
    }

    #[test]
    fn slope_fit_exact_line() {
        let f = SlopeFit::fit((0..5).map(|i| (i as f64, 3.0 * i as f64 - 1.0)).collect()).unwrap();
        assert!((f.slope - 3.0).abs() < 1e-14 && (f.intercept + 1.0).abs() < 1e-14);
        assert!(SlopeFit::fit(vec![(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn dyadic_closed_form() {
        assert!((dyadic_tv(1, 1.0, 3).unwrap() - 2.0 * PI / 8.0).abs() < 1e-15);
        let rep = dyadic_tv_slope(2, 1.0, &(1..=12).collect::<Vec<_>>()).unwrap();
        assert!((rep.fit.slope + 3.0).abs() < 1e-9);
    }

    #[test]
    fn interpolation_example() {
        let p = interpolation_points(1, &1.0f64, &0.25).unwrap();
        assert_eq!(p.theta, 0.5);
        assert_eq!(p.d_point, TypePoint { inv_p: 0.875, inv_q: 0.625 });
        let p = interpolation_points(1, &0.5f64, &0.25).unwrap();
        assert_eq!(p.theta, 0.25);
        assert_eq!(p.d_point, TypePoint { inv_p: 13.0 / 16.0, inv_q: 7.0 / 16.0 });
    }

    #[test]
    fn geometric_series() {
        let c = dyadic_series_closed(1, 1.0, 0.5).unwrap();
        let s = dyadic_series_partial(1, 1.0, 0.5, 200);
        assert!((c - s).abs() < 1e-12 * c);
    }
}
