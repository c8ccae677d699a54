//! Geometry of type sets in the `(1/p, 1/q)` square.
//!
//! For the fractional measure the necessary conditions cut out the trapezoid
//! with vertices `(0,0)`, `D'`, `D`, `(1,1)`; everything in it is known to be
//! of restricted type except the closed edge `D'D`, where only `C_gamma` is
//! settled. For the radial measure on `|w|^{2m}` the type set is a closed triangle.
//!
//! All routines are generic over [`Coord`], implemented for `f64` (ties within
//! `1e-12`) and for `BigRational` (exact).

use std::fmt::{self, Debug, Write as _};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scalar field for the geometry.
pub trait Coord:
    Clone
    + Debug
    + PartialOrd
    + Signed
    + num_traits::Num
    + for<'a> std::ops::Add<&'a Self, Output = Self>
{
    /// Boundary tie tolerance (zero in exact mode).
    fn tie() -> Self;
    fn to_f64(&self) -> f64;
    fn from_int(v: i64) -> Self;
    fn is_exact() -> bool;
    /// Scale factor for tolerances; exact mode ignores it.
    fn from_f64_lossy(x: f64) -> Self;
}

impl Coord for f64 {
    fn tie() -> Self {
        1e-12
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn is_exact() -> bool {
        false
    }
    fn from_f64_lossy(x: f64) -> Self {
        x
    }
}

impl Coord for BigRational {
    fn tie() -> Self {
        BigRational::zero()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_exact() -> bool {
        true
    }
    fn from_f64_lossy(_x: f64) -> Self {
        BigRational::one()
    }
}

/// Parse `"7/8"`, `"0.625"`, `"-1.5e-3"` or `"3"` as an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let d = parse_rational(den)?;
        if d.is_zero() {
            return Err(Error::invalid("value", format!("zero denominator in `{s}`")));
        }
        return Ok(parse_rational(num)? / d);
    }
    let bad = || Error::invalid("value", format!("cannot parse `{s}` as a number"));
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let num: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().map_err(|_| bad())? };
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(num);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -r } else { r })
}

/// Exact rational value of a finite `f64`.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_f64(x).ok_or_else(|| Error::invalid("value", "not finite"))
}

/// A point `(1/p, 1/q)` of the unit square.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypePoint<T> {
    pub inv_p: T,
    pub inv_q: T,
}

impl<T: Coord> TypePoint<T> {
    pub fn new(inv_p: T, inv_q: T) -> Result<Self> {
        let unit = |v: &T| *v >= T::zero() && *v <= T::one();
        if !unit(&inv_p) || !unit(&inv_q) {
            return Err(Error::invalid("point", "coordinates must lie in [0, 1]"));
        }
        Ok(TypePoint { inv_p, inv_q })
    }

    /// Reflection `(u, v) -> (1 - v, 1 - u)` across the non-principal diagonal.
    pub fn dual(&self) -> Self {
        TypePoint {
            inv_p: T::one() - self.inv_q.clone(),
            inv_q: T::one() - self.inv_p.clone(),
        }
    }

    pub fn to_f64(&self) -> TypePoint<f64> {
        TypePoint {
            inv_p: self.inv_p.to_f64(),
            inv_q: self.inv_q.to_f64(),
        }
    }
}

/// Half-plane `a inv_p + b inv_q <= c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane<T> {
    pub label: String,
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Coord> HalfPlane<T> {
    /// `c - (a u + b v)`: positive inside, zero on the line.
    pub fn slack(&self, p: &TypePoint<T>) -> T {
        self.c.clone() - (self.a.clone() * p.inv_p.clone() + self.b.clone() * p.inv_q.clone())
    }

    fn norm(&self) -> f64 {
        self.a.to_f64().hypot(self.b.to_f64())
    }

    fn to_f64(&self) -> HalfPlane<f64> {
        HalfPlane {
            label: self.label.clone(),
            a: self.a.to_f64(),
            b: self.b.to_f64(),
            c: self.c.to_f64(),
        }
    }
}

fn check_params<T: Coord>(n: u32, gamma: &T) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n", "must be at least 1"));
    }
    let two_n = T::from_int(2 * n as i64);
    if !(*gamma > T::zero() && *gamma < two_n) {
        return Err(Error::invalid("gamma", format!("requires 0 < gamma < {}", 2 * n)));
    }
    Ok(())
}

/// `D = ((4n^2 + 2n + gamma) / (2n(2n+2)), (2n + (2n+1) gamma) / (2n(2n+2)))`.
pub fn vertex_d<T: Coord>(n: u32, gamma: &T) -> Result<TypePoint<T>> {
    check_params(n, gamma)?;
    let n = n as i64;
    let den = T::from_int(2 * n * (2 * n + 2));
    Ok(TypePoint {
        inv_p: (T::from_int(4 * n * n + 2 * n) + gamma) / den.clone(),
        inv_q: (T::from_int(2 * n) + T::from_int(2 * n + 1) * gamma.clone()) / den,
    })
}

/// `D' = (1 - 1/q_D, 1 - 1/p_D)`.
pub fn vertex_dprime<T: Coord>(n: u32, gamma: &T) -> Result<TypePoint<T>> {
    Ok(vertex_d(n, gamma)?.dual())
}

/// `C_gamma = ((4n + 2 - gamma) / (2(2n+2)), (2 + gamma) / (2(2n+2)))`.
pub fn vertex_cgamma<T: Coord>(n: u32, gamma: &T) -> Result<TypePoint<T>> {
    check_params(n, gamma)?;
    let n = n as i64;
    let den = T::from_int(2 * (2 * n + 2));
    Ok(TypePoint {
        inv_p: (T::from_int(4 * n + 2) - gamma.clone()) / den.clone(),
        inv_q: (T::from_int(2) + gamma) / den,
    })
}

/// Vertex `((2n+1)/(2n+2), 1/(2n+2))` of the curved-surface triangle.
pub fn triangle_vertex<T: Coord>(n: u32) -> TypePoint<T> {
    let n = n as i64;
    let den = T::from_int(2 * n + 2);
    TypePoint {
        inv_p: T::from_int(2 * n + 1) / den.clone(),
        inv_q: T::one() / den,
    }
}

/// Weight of `(1,1)` in `(1 - theta) C + theta (1,1)` that balances the dyadic
/// bounds `2^{k gamma (1 - theta)}` and `2^{-k (2n - gamma) theta}`: `theta = gamma / (2n)`.
///
/// The complementary weight `(2n - gamma) / (2n)` is the one carried by `C`.
pub fn interpolation_theta<T: Coord>(n: u32, gamma: &T) -> Result<T> {
    check_params(n, gamma)?;
    Ok(gamma.clone() / T::from_int(2 * n as i64))
}

fn necessary_halfplanes<T: Coord>(n: u32, gamma: &T) -> Vec<HalfPlane<T>> {
    let n = n as i64;
    let mut hp = triangle_halfplanes::<T>(n as u32);
    hp.push(HalfPlane {
        label: "H4".into(),
        a: T::one(),
        b: -T::one(),
        c: (T::from_int(2 * n) - gamma.clone()) / T::from_int(2 * n + 2),
    });
    hp
}

fn triangle_halfplanes<T: Coord>(n: u32) -> Vec<HalfPlane<T>> {
    let n = n as i64;
    vec![
        // p <= q
        HalfPlane {
            label: "H1".into(),
            a: -T::one(),
            b: T::one(),
            c: T::zero(),
        },
        // 1/q >= (2n+1)/p - 2n
        HalfPlane {
            label: "H2".into(),
            a: T::from_int(2 * n + 1),
            b: -T::one(),
            c: T::from_int(2 * n),
        },
        // 1/q >= 1/((2n+1) p)
        HalfPlane {
            label: "H3".into(),
            a: T::one(),
            b: -T::from_int(2 * n + 1),
            c: T::zero(),
        },
    ]
}

/// A proved segment with endpoint inclusion flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment<T> {
    pub from: TypePoint<T>,
    pub to: TypePoint<T>,
    pub closed_from: bool,
    pub closed_to: bool,
}

/// A labelled point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vertex<T> {
    pub label: String,
    pub inv_p: T,
    pub inv_q: T,
}

/// The region cut out by the necessary conditions, with its landmarks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionReport<T> {
    pub n: u32,
    pub gamma: T,
    /// Polygon vertices in counter-clockwise order.
    pub vertices: Vec<Vertex<T>>,
    pub halfplanes: Vec<HalfPlane<T>>,
    pub proved_in_segments: Vec<Segment<T>>,
    pub proved_point: TypePoint<T>,
}

impl<T: Coord> RegionReport<T> {
    /// `ProvedIn` for closed ends of proved segments and for the proved point,
    /// `Unknown` for the remaining vertices.
    pub fn vertex_status(&self, v: &Vertex<T>) -> Status {
        let p = TypePoint {
            inv_p: v.inv_p.clone(),
            inv_q: v.inv_q.clone(),
        };
        let closed_end = self
            .proved_in_segments
            .iter()
            .any(|s| (s.closed_from && same(&s.from, &p)) || (s.closed_to && same(&s.to, &p)));
        if closed_end || same(&self.proved_point, &p) {
            Status::ProvedIn
        } else {
            Status::Unknown
        }
    }

    pub fn to_f64(&self) -> RegionReport<f64> {
        RegionReport {
            n: self.n,
            gamma: self.gamma.to_f64(),
            vertices: self
                .vertices
                .iter()
                .map(|v| Vertex {
                    label: v.label.clone(),
                    inv_p: v.inv_p.to_f64(),
                    inv_q: v.inv_q.to_f64(),
                })
                .collect(),
            halfplanes: self.halfplanes.iter().map(|h| h.to_f64()).collect(),
            proved_in_segments: self
                .proved_in_segments
                .iter()
                .map(|s| Segment {
                    from: s.from.to_f64(),
                    to: s.to.to_f64(),
                    closed_from: s.closed_from,
                    closed_to: s.closed_to,
                })
                .collect(),
            proved_point: self.proved_point.to_f64(),
        }
    }
}

fn intersect<T: Coord>(h: &HalfPlane<T>, g: &HalfPlane<T>) -> Option<TypePoint<T>> {
    let det = h.a.clone() * g.b.clone() - h.b.clone() * g.a.clone();
    if det.is_zero() {
        return None;
    }
    let u = (h.c.clone() * g.b.clone() - h.b.clone() * g.c.clone()) / det.clone();
    let v = (h.a.clone() * g.c.clone() - h.c.clone() * g.a.clone()) / det;
    Some(TypePoint { inv_p: u, inv_q: v })
}

fn square_halfplanes<T: Coord>() -> Vec<HalfPlane<T>> {
    let z = T::zero;
    let o = T::one;
    vec![
        HalfPlane { label: "u>=0".into(), a: -o(), b: z(), c: z() },
        HalfPlane { label: "u<=1".into(), a: o(), b: z(), c: o() },
        HalfPlane { label: "v>=0".into(), a: z(), b: -o(), c: z() },
        HalfPlane { label: "v<=1".into(), a: z(), b: o(), c: o() },
    ]
}

/// Vertices of `{square} ∩ {half-planes}` by pairwise intersection,
/// deduplicated and sorted counter-clockwise around the centroid.
fn polygon<T: Coord>(hp: &[HalfPlane<T>]) -> Vec<TypePoint<T>> {
    let mut all: Vec<HalfPlane<T>> = hp.to_vec();
    all.extend(square_halfplanes());
    let tol = T::tie();
    let mut pts: Vec<TypePoint<T>> = Vec::new();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            if let Some(p) = intersect(&all[i], &all[j]) {
                if all.iter().all(|h| h.slack(&p) >= -tol.clone()) {
                    let dup = pts.iter().any(|q| {
                        (q.inv_p.clone() - p.inv_p.clone()).abs() <= tol
                            && (q.inv_q.clone() - p.inv_q.clone()).abs() <= tol
                    });
                    if !dup {
                        pts.push(p);
                    }
                }
            }
        }
    }
    let k = pts.len() as f64;
    let cx = pts.iter().map(|p| p.inv_p.to_f64()).sum::<f64>() / k;
    let cy = pts.iter().map(|p| p.inv_q.to_f64()).sum::<f64>() / k;
    pts.sort_by(|a, b| {
        let ta = (a.inv_q.to_f64() - cy).atan2(a.inv_p.to_f64() - cx);
        let tb = (b.inv_q.to_f64() - cy).atan2(b.inv_p.to_f64() - cx);
        ta.total_cmp(&tb)
    });
    pts
}

fn same<T: Coord>(a: &TypePoint<T>, b: &TypePoint<T>) -> bool {
    let tol = T::tie();
    (a.inv_p.clone() - b.inv_p.clone()).abs() <= tol && (a.inv_q.clone() - b.inv_q.clone()).abs() <= tol
}

fn label_for<T: Coord>(p: &TypePoint<T>, named: &[(&str, TypePoint<T>)]) -> String {
    named
        .iter()
        .find(|(_, q)| same(p, q))
        .map(|(l, _)| l.to_string())
        .unwrap_or_else(|| "V".into())
}

/// The necessary-condition region for the fractional measure.
pub fn necessary_region<T: Coord>(n: u32, gamma: &T) -> Result<RegionReport<T>> {
    check_params(n, gamma)?;
    let hp = necessary_halfplanes(n, gamma);
    let d = vertex_d(n, gamma)?;
    let dp = vertex_dprime(n, gamma)?;
    let c = vertex_cgamma(n, gamma)?;
    let origin = TypePoint { inv_p: T::zero(), inv_q: T::zero() };
    let corner = TypePoint { inv_p: T::one(), inv_q: T::one() };
    let named = [
        ("O", origin.clone()),
        ("D'", dp.clone()),
        ("D", d.clone()),
        ("I", corner.clone()),
    ];
    let vertices = polygon(&hp)
        .into_iter()
        .map(|p| Vertex {
            label: label_for(&p, &named),
            inv_p: p.inv_p,
            inv_q: p.inv_q,
        })
        .collect();
    let proved_in_segments = vec![
        Segment {
            from: corner.clone(),
            to: d,
            closed_from: true,
            closed_to: false,
        },
        Segment {
            from: origin.clone(),
            to: dp,
            closed_from: true,
            closed_to: false,
        },
        Segment {
            from: origin,
            to: corner,
            closed_from: true,
            closed_to: true,
        },
    ];
    Ok(RegionReport {
        n,
        gamma: gamma.clone(),
        vertices,
        halfplanes: hp,
        proved_in_segments,
        proved_point: c,
    })
}

/// The closed triangle for the radial measure on the graph of `|w|^{2m}`.
pub fn radial_region<T: Coord>(n: u32, m: u32) -> Result<RegionReport<T>> {
    if n == 0 || m < 2 {
        return Err(Error::invalid("n, m", "requires n >= 1 and m >= 2"));
    }
    let hp = triangle_halfplanes::<T>(n);
    let c = triangle_vertex::<T>(n);
    let origin = TypePoint { inv_p: T::zero(), inv_q: T::zero() };
    let corner = TypePoint { inv_p: T::one(), inv_q: T::one() };
    let named = [("O", origin.clone()), ("C", c.clone()), ("I", corner.clone())];
    let vertices = polygon(&hp)
        .into_iter()
        .map(|p| Vertex {
            label: label_for(&p, &named),
            inv_p: p.inv_p,
            inv_q: p.inv_q,
        })
        .collect();
    let gamma = T::from_int(2 * (m as i64 - 1)) / T::from_int((n as i64 + 1) * m as i64);
    let seg = |a: &TypePoint<T>, b: &TypePoint<T>| Segment {
        from: a.clone(),
        to: b.clone(),
        closed_from: true,
        closed_to: true,
    };
    Ok(RegionReport {
        n,
        gamma,
        vertices,
        halfplanes: hp,
        proved_in_segments: vec![seg(&origin, &corner), seg(&corner, &c), seg(&c, &origin)],
        proved_point: c,
    })
}

/// Which measure a point is classified for.
#[derive(Debug, Clone, PartialEq)]
pub enum Variant<T> {
    Fractional { n: u32, gamma: T },
    Radial { n: u32, m: u32 },
}

/// Three-valued membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    ProvedIn,
    ProvedOut,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::ProvedIn => "ProvedIn",
            Status::ProvedOut => "ProvedOut",
            Status::Unknown => "Unknown",
        })
    }
}

/// Classify a point of the unit square.
///
/// Fractional measure: outside the trapezoid is `ProvedOut`; the closed
/// trapezoid minus the closed edge `D'D` is `ProvedIn`, as is `C_gamma`; the rest of
/// that edge is `Unknown`. In floating mode a point within the tie tolerance of
/// the `D'D` line, or just outside another edge, is reported `Unknown`.
///
/// Radial measure: the closed triangle is `ProvedIn`, the rest `ProvedOut`.
pub fn classify_point<T: Coord>(variant: &Variant<T>, pt: &TypePoint<T>) -> Result<Status> {
    let pt = TypePoint::new(pt.inv_p.clone(), pt.inv_q.clone())?;
    let tol = T::tie();
    match variant {
        Variant::Radial { n, m } => {
            if *n == 0 || *m < 2 {
                return Err(Error::invalid("n, m", "requires n >= 1 and m >= 2"));
            }
            let inside = triangle_halfplanes::<T>(*n)
                .iter()
                .all(|h| h.slack(&pt) >= -(tol.clone() * T::from_f64_lossy(h.norm())));
            Ok(if inside { Status::ProvedIn } else { Status::ProvedOut })
        }
        Variant::Fractional { n, gamma } => {
            check_params(*n, gamma)?;
            let c = vertex_cgamma(*n, gamma)?;
            let hp = necessary_halfplanes(*n, gamma);
            let scaled: Vec<(T, T)> = hp
                .iter()
                .map(|h| (h.slack(&pt), tol.clone() * T::from_f64_lossy(h.norm())))
                .collect();
            if scaled.iter().any(|(s, t)| *s < -t.clone()) {
                return Ok(Status::ProvedOut);
            }
            if same(&pt, &c) {
                return Ok(Status::ProvedIn);
            }
            let (s4, t4) = &scaled[3];
            if s4.abs() <= *t4 {
                return Ok(Status::Unknown);
            }
            if scaled.iter().any(|(s, _)| *s < T::zero()) {
                return Ok(Status::Unknown);
            }
            Ok(Status::ProvedIn)
        }
    }
}

/// Output format for [`emit_region`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Format {
    Svg,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "svg" => Ok(Format::Svg),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Unsupported(format!("output format `{other}`"))),
        }
    }
}

/// Fixed 17-significant-digit scientific formatting.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_point(out: &mut String, p: &TypePoint<f64>) {
    let _ = write!(out, "{{\"inv_p\":{},\"inv_q\":{}}}", fmt_num(p.inv_p), fmt_num(p.inv_q));
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization")
}

/// Render a report as SVG, CSV or JSON. Output is byte-stable.
pub fn emit_region<T: Coord>(report: &RegionReport<T>, format: Format) -> String {
    let r = report.to_f64();
    match format {
        Format::Json => {
            let mut out = String::new();
            let _ = write!(out, "{{\"n\":{},\"gamma\":{},\"vertices\":[", r.n, fmt_num(r.gamma));
            for (i, v) in r.vertices.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(
                    out,
                    "{{\"label\":{},\"inv_p\":{},\"inv_q\":{}}}",
                    json_string(&v.label),
                    fmt_num(v.inv_p),
                    fmt_num(v.inv_q)
                );
            }
            out.push_str("],\"halfplanes\":[");
            for (i, h) in r.halfplanes.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(
                    out,
                    "{{\"label\":{},\"a\":{},\"b\":{},\"c\":{}}}",
                    json_string(&h.label),
                    fmt_num(h.a),
                    fmt_num(h.b),
                    fmt_num(h.c)
                );
            }
            out.push_str("],\"proved_in_segments\":[");
            for (i, s) in r.proved_in_segments.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str("{\"from\":");
                json_point(&mut out, &s.from);
                out.push_str(",\"to\":");
                json_point(&mut out, &s.to);
                let _ = write!(out, ",\"closed_from\":{},\"closed_to\":{}}}", s.closed_from, s.closed_to);
            }
            out.push_str("],\"proved_point\":");
            json_point(&mut out, &r.proved_point);
            out.push_str("}\n");
            out
        }
        Format::Csv => {
            let mut out = String::new();
            let _ = writeln!(out, "# n={} gamma={}", r.n, fmt_num(r.gamma));
            let _ = writeln!(
                out,
                "# proved_point inv_p={} inv_q={}",
                fmt_num(r.proved_point.inv_p),
                fmt_num(r.proved_point.inv_q)
            );
            let _ = writeln!(out, "# halfplane rows: a*inv_p + b*inv_q <= c with a, b, c in columns inv_p, inv_q, status");
            out.push_str("object,type,inv_p,inv_q,status\n");
            for (v, exact) in r.vertices.iter().zip(&report.vertices) {
                let status = report.vertex_status(exact);
                let _ = writeln!(out, "vertex,{},{},{},{status}", v.label, fmt_num(v.inv_p), fmt_num(v.inv_q));
            }
            for h in &r.halfplanes {
                let _ = writeln!(out, "halfplane,{},{},{},{}", h.label, fmt_num(h.a), fmt_num(h.b), fmt_num(h.c));
            }
            out
        }
        Format::Svg => render_svg(&r),
    }
}

fn render_svg(r: &RegionReport<f64>) -> String {
    // y axis points up in the (1/p, 1/q) square
    let y = |v: f64| 1.0 - v;
    let mut out = String::new();
    out.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1 1\" width=\"480\" height=\"480\" style=\"overflow:visible\">\n",
    );
    out.push_str("  <rect x=\"0\" y=\"0\" width=\"1\" height=\"1\" fill=\"none\" stroke=\"#888\" stroke-width=\"0.004\"/>\n");
    let pts: Vec<String> = r
        .vertices
        .iter()
        .map(|v| format!("{:.6},{:.6}", v.inv_p, y(v.inv_q)))
        .collect();
    let _ = writeln!(
        out,
        "  <polygon points=\"{}\" fill=\"#cfe3f7\" stroke=\"#2b6cb0\" stroke-width=\"0.004\"/>",
        pts.join(" ")
    );
    for s in &r.proved_in_segments {
        let _ = writeln!(
            out,
            "  <line x1=\"{:.6}\" y1=\"{:.6}\" x2=\"{:.6}\" y2=\"{:.6}\" stroke=\"#1a7f37\" stroke-width=\"0.008\"/>",
            s.from.inv_p,
            y(s.from.inv_q),
            s.to.inv_p,
            y(s.to.inv_q)
        );
    }
    for v in &r.vertices {
        if v.label == "D" || v.label == "D'" {
            let _ = writeln!(
                out,
                "  <circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"0.012\" fill=\"white\" stroke=\"#c53030\" stroke-width=\"0.005\"><title>{}</title></circle>",
                v.inv_p,
                y(v.inv_q),
                v.label
            );
        }
    }
    let _ = writeln!(
        out,
        "  <circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"0.012\" fill=\"#1a7f37\"><title>proved point</title></circle>",
        r.proved_point.inv_p,
        y(r.proved_point.inv_q)
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn tp(a: &str, b: &str) -> TypePoint<BigRational> {
        TypePoint::new(q(a), q(b)).unwrap()
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(q("7/8"), q("0.875"));
        assert_eq!(q("-1.5e-3"), BigRational::new((-3).into(), 2000.into()));
        assert_eq!(q("3"), BigRational::from_integer(3.into()));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn vertices_exact() {
        let g = q("1");
        assert_eq!(vertex_d(1, &g).unwrap(), tp("7/8", "5/8"));
        assert_eq!(vertex_dprime(1, &g).unwrap(), tp("3/8", "1/8"));
        assert_eq!(vertex_cgamma(1, &g).unwrap(), tp("5/8", "3/8"));
        assert!(vertex_d(1, &q("0")).is_err());
        assert!(vertex_d(1, &q("2")).is_err());
    }

    #[test]
    fn region_is_trapezoid() {
        let r = necessary_region(1, &q("1")).unwrap();
        let labels: Vec<&str> = r.vertices.iter().map(|v| v.label.as_str()).collect();
        assert_eq!(labels.len(), 4);
        for l in ["O", "D'", "D", "I"] {
            assert!(labels.contains(&l), "{labels:?}");
        }
    }

    #[test]
    fn classification_examples() {
        let frac = Variant::Fractional { n: 1, gamma: q("1") };
        assert_eq!(classify_point(&frac, &tp("1/2", "1/2")).unwrap(), Status::ProvedIn);
        assert_eq!(classify_point(&frac, &tp("0.6", "0.5")).unwrap(), Status::ProvedIn);
        assert_eq!(classify_point(&frac, &tp("7/8", "5/8")).unwrap(), Status::Unknown);
        assert_eq!(classify_point(&frac, &tp("3/8", "1/8")).unwrap(), Status::Unknown);
        assert_eq!(classify_point(&frac, &tp("5/8", "3/8")).unwrap(), Status::ProvedIn);
        assert_eq!(classify_point(&frac, &tp("1/2", "1/4")).unwrap(), Status::Unknown);
        assert_eq!(classify_point(&frac, &tp("1", "0")).unwrap(), Status::ProvedOut);
        assert_eq!(classify_point(&frac, &tp("1", "1")).unwrap(), Status::ProvedIn);
        let rad = Variant::Radial { n: 1, m: 2 };
        assert_eq!(classify_point(&rad, &tp("3/4", "1/4")).unwrap(), Status::ProvedIn);
        assert_eq!(classify_point(&rad, &tp("1", "0")).unwrap(), Status::ProvedOut);
    }

    #[test]
    fn float_mode_matches_exact_on_landmarks() {
        let frac = Variant::Fractional { n: 1, gamma: 1.0 };
        let p = |a: f64, b: f64| TypePoint::new(a, b).unwrap();
        assert_eq!(classify_point(&frac, &p(0.625, 0.375)).unwrap(), Status::ProvedIn);
        assert_eq!(classify_point(&frac, &p(0.875, 0.625)).unwrap(), Status::Unknown);
        assert_eq!(classify_point(&frac, &p(0.5, 0.5)).unwrap(), Status::ProvedIn);
        assert_eq!(classify_point(&frac, &p(0.875, 0.625 + 1e-13)).unwrap(), Status::Unknown);
    }

    #[test]
    fn emit_formats() {
        let r = necessary_region(1, &q("1")).unwrap();
        let svg = emit_region(&r, Format::Svg);
        assert_eq!(svg.matches("<polygon").count(), 1);
        let csv = emit_region(&r, Format::Csv);
        let rows = csv.lines().filter(|l| !l.starts_with('#')).count() - 1;
        assert_eq!(rows, r.vertices.len() + r.halfplanes.len());
        let json = emit_region(&r, Format::Json);
        let back: RegionReport<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r.to_f64());
        assert!("pdf".parse::<Format>().is_err());
    }
}
