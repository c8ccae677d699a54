//! Adaptive Gauss-Kronrod quadrature (21-point Kronrod extension of the
//! 10-point Gauss rule) for real and complex integrands.
//!
//! Two entry points:
//!
//! * [`integrate`] / [`integrate_with_breaks`]: global adaptive bisection on
//!   an interval, optionally pre-split at known breakpoints;
//! * [`integrate_panels`]: a sum of panels integrated in *local* coordinates.
//!   Oscillatory integrands use it with panels aligned to half periods so the
//!   phase can be referenced to each panel start and evaluated without
//!   amplifying node rounding.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, AddAssign, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_352,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_36,
    0.295_524_224_714_752_87,
];

/// Tolerances and limits for every numerical integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Absolute error target.
    pub tol: f64,
    /// Relative error target; the effective target is `max(tol, rel_tol * |I|)`.
    pub rel_tol: f64,
    /// Maximum number of subintervals per adaptive run.
    pub max_subdiv: usize,
    /// Truncation radius for infinite ranges; `0` selects it automatically.
    pub truncation_radius: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            tol: 1e-13,
            rel_tol: 1e-11,
            max_subdiv: 4000,
            truncation_radius: 0.0,
        }
    }
}

impl QuadratureSpec {
    pub fn new(tol: f64, max_subdiv: usize, truncation_radius: f64) -> Result<Self> {
        let spec = QuadratureSpec {
            tol,
            rel_tol: 0.0,
            max_subdiv,
            truncation_radius,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::invalid("tol", "must be positive and finite"));
        }
        if !(self.rel_tol >= 0.0) {
            return Err(Error::invalid("rel_tol", "must be non-negative"));
        }
        if self.max_subdiv == 0 {
            return Err(Error::invalid("max_subdiv", "must be at least 1"));
        }
        if !(self.truncation_radius >= 0.0) {
            return Err(Error::invalid("truncation_radius", "must be non-negative"));
        }
        Ok(())
    }

    pub(crate) fn target(&self, value: f64) -> f64 {
        self.tol.max(self.rel_tol * value)
    }
}

/// Values that can be integrated: `f64` and `Complex64`.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + AddAssign
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
    fn parts(&self) -> (f64, f64);
    fn from_parts(re: f64, im: f64) -> Self;
    fn is_finite_value(&self) -> bool {
        let (a, b) = self.parts();
        a.is_finite() && b.is_finite()
    }
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn parts(&self) -> (f64, f64) {
        (*self, 0.0)
    }
    fn from_parts(re: f64, _im: f64) -> Self {
        re
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn parts(&self) -> (f64, f64) {
        (self.re, self.im)
    }
    fn from_parts(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: [f64; 2],
    comp: [f64; 2],
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add<V: QuadValue>(&mut self, v: V) {
        let (re, im) = v.parts();
        for (k, x) in [re, im].into_iter().enumerate() {
            let t = self.sum[k] + x;
            if self.sum[k].abs() >= x.abs() {
                self.comp[k] += (self.sum[k] - t) + x;
            } else {
                self.comp[k] += (x - t) + self.sum[k];
            }
            self.sum[k] = t;
        }
    }

    pub fn value<V: QuadValue>(&self) -> V {
        V::from_parts(self.sum[0] + self.comp[0], self.sum[1] + self.comp[1])
    }
}

/// Result of a quadrature run.
#[derive(Debug, Clone, Copy)]
pub struct Estimate<V> {
    pub value: V,
    /// Discretization error estimate.
    pub error: f64,
    /// Rounding floor, `eps * int |f|`.
    pub roundoff: f64,
    pub evaluations: usize,
    pub intervals: usize,
    pub converged: bool,
}

impl<V: QuadValue> Estimate<V> {
    /// Turn a non-converged run into [`Error::ToleranceNotMet`].
    pub fn require(self, tolerance: f64) -> Result<Self> {
        if !self.value.is_finite_value() {
            return Err(Error::NonFinite("quadrature"));
        }
        if self.converged || self.error <= tolerance {
            Ok(self)
        } else {
            Err(Error::ToleranceNotMet {
                estimate: self.value.magnitude(),
                error: self.error,
                tolerance,
            })
        }
    }
}

struct Rule<V> {
    value: V,
    error: f64,
    resabs: f64,
}

fn gk21<V: QuadValue, F: FnMut(f64) -> V>(f: &mut F, a: f64, b: f64) -> Rule<V> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = V::zero();
    let mut resabs = WGK[10] * fc.magnitude();
    let mut fv1 = [V::zero(); 10];
    let mut fv2 = [V::zero(); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let pair = f1 + f2;
        kronrod += pair * WGK[j];
        resabs += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut resasc = WGK[10] * (fc - mean).magnitude();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).magnitude() + (fv2[j] - mean).magnitude());
    }
    let value = kronrod * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let diff = ((kronrod - gauss) * half).magnitude();
    let mut error = diff;
    if resasc != 0.0 && diff != 0.0 {
        error = resasc * (200.0 * diff / resasc).powf(1.5).min(1.0);
    }
    Rule {
        value,
        error,
        resabs,
    }
}

#[derive(Debug, Clone, Copy)]
struct HeapKey(f64, usize);

impl PartialEq for HeapKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapKey {}
impl PartialOrd for HeapKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .total_cmp(&other.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

struct Interval<V> {
    a: f64,
    b: f64,
    rule: Rule<V>,
}

fn refinable<V>(iv: &Interval<V>) -> bool {
    let width_ok = (iv.b - iv.a).abs() > 64.0 * f64::EPSILON * iv.a.abs().max(iv.b.abs()).max(f64::MIN_POSITIVE);
    width_ok && iv.rule.error > 50.0 * f64::EPSILON * iv.rule.resabs
}

/// Global adaptive quadrature of `f` on `[a, b]` starting from the panels
/// delimited by `breaks` (which must be sorted and include both endpoints).
pub fn integrate_with_breaks<V: QuadValue, F: FnMut(f64) -> V>(
    mut f: F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_subdiv: usize,
) -> Estimate<V> {
    let mut intervals: Vec<Interval<V>> = Vec::with_capacity(breaks.len().max(2) * 2);
    let mut heap = BinaryHeap::new();
    let mut total_err = 0.0;
    let mut total = CompensatedSum::new();
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        let rule = gk21(&mut f, w[0], w[1]);
        evaluations += 21;
        total_err += rule.error;
        total.add(rule.value);
        let iv = Interval {
            a: w[0],
            b: w[1],
            rule,
        };
        if refinable(&iv) {
            heap.push(HeapKey(iv.rule.error, intervals.len()));
        }
        intervals.push(iv);
    }
    let mut running: V = total.value();
    let max_intervals = max_subdiv.max(intervals.len());
    let mut converged = false;
    loop {
        if total_err <= abs_tol.max(rel_tol * running.magnitude()) {
            converged = true;
            break;
        }
        let Some(HeapKey(_, idx)) = heap.pop() else {
            // everything left is at the rounding floor
            converged = true;
            break;
        };
        if intervals.len() >= max_intervals {
            heap.push(HeapKey(intervals[idx].rule.error, idx));
            break;
        }
        let (a, b) = (intervals[idx].a, intervals[idx].b);
        let mid = 0.5 * (a + b);
        let left = gk21(&mut f, a, mid);
        let right = gk21(&mut f, mid, b);
        evaluations += 42;
        let old = &intervals[idx].rule;
        total_err += left.error + right.error - old.error;
        running = running + (left.value + right.value - old.value);
        let left_iv = Interval { a, b: mid, rule: left };
        let right_iv = Interval { a: mid, b, rule: right };
        if refinable(&left_iv) {
            heap.push(HeapKey(left_iv.rule.error, idx));
        }
        if refinable(&right_iv) {
            heap.push(HeapKey(right_iv.rule.error, intervals.len()));
        }
        intervals[idx] = left_iv;
        intervals.push(right_iv);
        if intervals.len() % 512 == 0 {
            total_err = intervals.iter().map(|iv| iv.rule.error).sum();
        }
    }
    let mut sum = CompensatedSum::new();
    let mut err = 0.0;
    let mut resabs = 0.0;
    for iv in &intervals {
        sum.add(iv.rule.value);
        err += iv.rule.error;
        resabs += iv.rule.resabs;
    }
    Estimate {
        value: sum.value(),
        error: err,
        roundoff: f64::EPSILON * resabs,
        evaluations,
        intervals: intervals.len(),
        converged,
    }
}

/// Adaptive quadrature on `[a, b]` under `spec`; fails if the tolerance is not met.
pub fn integrate<V: QuadValue, F: FnMut(f64) -> V>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate<V>> {
    let est = integrate_with_breaks(f, &[a, b], spec.tol, spec.rel_tol, spec.max_subdiv);
    let target = spec.target(est.value.magnitude());
    est.require(target)
}

/// Sum of panel integrals, each computed in its local coordinate `tau in [0, len]`.
///
/// `f(i, tau)` evaluates the integrand of panel `i`. A first pass applies one
/// Kronrod rule per panel to size the error budget, then panels that miss their
/// share are refined adaptively.
pub fn integrate_panels<V: QuadValue, F: FnMut(usize, f64) -> V>(
    lengths: &[f64],
    mut f: F,
    abs_tol: f64,
    rel_tol: f64,
    max_subdiv: usize,
) -> Estimate<V> {
    let panels = lengths.len().max(1);
    let mut first: Vec<Rule<V>> = Vec::with_capacity(lengths.len());
    let mut rough = CompensatedSum::new();
    let mut magnitude = 0.0;
    for (i, &len) in lengths.iter().enumerate() {
        let rule = gk21(&mut |tau| f(i, tau), 0.0, len);
        rough.add(rule.value);
        magnitude += rule.value.magnitude();
        first.push(rule);
    }
    let rough_value: V = rough.value();
    let target = abs_tol.max(rel_tol * rough_value.magnitude());
    // a panel share never asks for less than the rounding of that panel
    let share = target / panels as f64;

    let mut sum = CompensatedSum::new();
    let mut error = 0.0;
    let mut resabs = 0.0;
    let mut evaluations = 21 * lengths.len();
    let mut intervals = 0;
    let mut converged = true;
    for (i, &len) in lengths.iter().enumerate() {
        let rule = &first[i];
        if rule.error <= share || rule.error <= 50.0 * f64::EPSILON * rule.resabs {
            sum.add(rule.value);
            error += rule.error;
            resabs += rule.resabs;
            intervals += 1;
            continue;
        }
        let est = integrate_with_breaks(|tau| f(i, tau), &[0.0, len], share, 0.0, max_subdiv);
        sum.add(est.value);
        error += est.error;
        resabs += est.roundoff / f64::EPSILON;
        evaluations += est.evaluations;
        intervals += est.intervals;
        converged &= est.converged;
    }
    let _ = magnitude;
    Estimate {
        value: sum.value(),
        error,
        roundoff: f64::EPSILON * resabs,
        evaluations,
        intervals,
        converged: converged || error <= target,
    }
}

/// Power `p` for the substitution `s = c v^p` that makes `s^beta ds` smooth at `v = 0`.
pub(crate) fn endpoint_power(beta: Complex64) -> i32 {
    if beta.im == 0.0 && beta.re >= 0.0 && beta.re.fract() == 0.0 {
        return 1;
    }
    let mut p = 2;
    while (p as f64) * (beta.re + 1.0) < 2.0 {
        p += 2;
    }
    p
}


/// Panel edges on `[a, b]` no wider than half a period of `e^{i freq x}` and
/// no wider than `max_width`. Edges sit on exact multiples of the width from `a`.
pub fn half_period_edges(a: f64, b: f64, freq: f64, max_width: f64) -> Vec<f64> {
    let mut width = max_width;
    if freq != 0.0 {
        width = width.min(std::f64::consts::PI / freq.abs());
    }
    let count = ((b - a) / width).ceil().max(1.0) as usize;
    let mut edges: Vec<f64> = (0..count).map(|j| a + j as f64 * width).collect();
    edges.push(b);
    edges
}

/// Nodes and weights of the 21-point Kronrod rule mapped to `[a, b]`.
pub fn kronrod_nodes(a: f64, b: f64) -> [(f64, f64); 21] {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut out = [(center, WGK[10] * half); 21];
    for j in 0..10 {
        let dx = half * XGK[j];
        out[2 * j] = (center - dx, WGK[j] * half);
        out[2 * j + 1] = (center + dx, WGK[j] * half);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_nodes_integrate_polynomials() {
        let s: f64 = kronrod_nodes(0.0, 2.0).iter().map(|(x, w)| w * x.powi(10)).sum();
        assert!((s - 2f64.powi(11) / 11.0).abs() < 1e-12);
    }

    #[test]
    fn polynomial_exact() {
        let spec = QuadratureSpec::default();
        let est = integrate(|x: f64| x.powi(5) - 2.0 * x, -1.0, 3.0, &spec).unwrap();
        let exact = (3f64.powi(6) - 1.0) / 6.0 - (9.0 - 1.0);
        assert!((est.value - exact).abs() < 1e-12);
        assert_eq!(est.intervals, 1);
    }

    #[test]
    fn endpoint_singularity() {
        let spec = QuadratureSpec::default();
        let est = integrate(|x: f64| x.powf(-0.7), 0.0, 1.0, &spec).unwrap();
        assert!((est.value - 1.0 / 0.3).abs() < 1e-9, "{}", est.value);
    }

    #[test]
    fn complex_oscillatory() {
        let spec = QuadratureSpec::default();
        let est = integrate(|x: f64| Complex64::new(0.0, 50.0 * x).exp(), 0.0, 2.0, &spec).unwrap();
        let exact = (Complex64::new(0.0, 100.0).exp() - 1.0) / Complex64::new(0.0, 50.0);
        assert!((est.value - exact).norm() < 1e-12);
    }

    #[test]
    fn discontinuity_converges() {
        let spec = QuadratureSpec {
            tol: 1e-10,
            ..Default::default()
        };
        let est = integrate(|x: f64| if x < 0.3 { 1.0 } else { 0.0 }, 0.0, 1.0, &spec).unwrap();
        assert!((est.value - 0.3).abs() < 1e-9);
    }

    #[test]
    fn tolerance_failure_is_reported() {
        let spec = QuadratureSpec {
            tol: 1e-15,
            rel_tol: 0.0,
            max_subdiv: 3,
            truncation_radius: 0.0,
        };
        let res = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &spec);
        assert!(matches!(res, Err(Error::ToleranceNotMet { .. })));
    }

    #[test]
    fn panels_match_single_interval() {
        let edges = half_period_edges(0.0, 10.0, 7.0, 1.0);
        let lengths: Vec<f64> = edges.windows(2).map(|w| w[1] - w[0]).collect();
        let est: Estimate<f64> = integrate_panels(
            &lengths,
            |i, tau| {
                let x = edges[i] + tau;
                (-x).exp() * x.sin()
            },
            1e-14,
            0.0,
            100,
        );
        let exact = 0.5 * (1.0 - (-10f64).exp() * (10f64.sin() + 10f64.cos()));
        assert!((est.value - exact).abs() < 1e-13);
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::new(0.0, 10, 0.0).is_err());
        assert!(QuadratureSpec::new(1e-8, 0, 0.0).is_err());
        assert!(QuadratureSpec::new(1e-8, 10, 5.0).is_ok());
    }
}
