//! Browser bindings for the demo page in `www/`.
//!
//! Each export has a plain Rust counterpart returning `Result<_, String>` so it
//! can be tested natively.

use heisenberg_fractional::laguerre_transform::{fkbeta_hat_closed, fkbeta_hat_sup_bound, TransformQuery};
use heisenberg_fractional::quad::QuadratureSpec;
use heisenberg_fractional::spectrum::r_lambda_hat;
use heisenberg_fractional::type_set::{
    classify_point, emit_region, necessary_region, parse_rational, radial_region, Format, TypePoint, Variant,
};
use heisenberg_fractional::Complex64;
use wasm_bindgen::prelude::*;

fn text(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn variant(kind: &str, n: u32, gamma: &str, m: u32) -> Result<Variant<heisenberg_fractional::BigRational>, String> {
    match kind {
        "fractional" => Ok(Variant::Fractional {
            n,
            gamma: parse_rational(gamma).map_err(text)?,
        }),
        "radial" => Ok(Variant::Radial { n, m }),
        other => Err(format!("unknown variant `{other}`")),
    }
}

/// Status of `(inv_p, inv_q)`, computed in exact rational arithmetic.
pub fn classify(kind: &str, n: u32, gamma: &str, m: u32, inv_p: &str, inv_q: &str) -> Result<String, String> {
    let v = variant(kind, n, gamma, m)?;
    let p = TypePoint::new(parse_rational(inv_p).map_err(text)?, parse_rational(inv_q).map_err(text)?).map_err(text)?;
    Ok(classify_point(&v, &p).map_err(text)?.to_string())
}

/// SVG drawing of the region.
pub fn region_svg(kind: &str, n: u32, gamma: &str, m: u32) -> Result<String, String> {
    let report = match variant(kind, n, gamma, m)? {
        Variant::Fractional { n, gamma } => necessary_region(n, &gamma).map_err(text)?,
        Variant::Radial { n, m } => radial_region(n, m).map_err(text)?,
    };
    Ok(emit_region(&report, Format::Svg))
}

/// Flattened triples `(xi, |F(xi)|, envelope(xi))` on `samples` points of `[-xi_max, xi_max]`.
pub fn transform_curve(n: u32, k: u32, beta_re: f64, beta_im: f64, xi_max: f64, samples: u32) -> Result<Vec<f64>, String> {
    if samples < 2 || !(xi_max > 0.0) {
        return Err("need at least 2 samples and xi_max > 0".into());
    }
    let beta = Complex64::new(beta_re, beta_im);
    let bound = fkbeta_hat_sup_bound(n, k, beta).map_err(text)?;
    let mut out = Vec::with_capacity(3 * samples as usize);
    for i in 0..samples {
        let xi = -xi_max + 2.0 * xi_max * i as f64 / (samples - 1) as f64;
        let q = TransformQuery::new(n, k, beta, xi).map_err(text)?;
        out.push(xi);
        out.push(fkbeta_hat_closed(&q).map_err(text)?.norm());
        out.push(bound.envelope(beta, xi));
    }
    Ok(out)
}

/// Flattened pairs `(xi, |R_lambda(xi)| / |lambda|^{(m-1)/m})` on `[xi_lo, xi_hi]`.
pub fn oscillatory_profile(m: u32, lambda: f64, xi_lo: f64, xi_hi: f64, samples: u32) -> Result<Vec<f64>, String> {
    if samples < 2 || !(xi_hi > xi_lo) {
        return Err("need at least 2 samples and xi_hi > xi_lo".into());
    }
    let quad = QuadratureSpec::new(1e-9, 200_000, 0.0).map_err(text)?.with_rel_tol(1e-7);
    let scale = lambda.abs().powf((m as f64 - 1.0) / m as f64);
    let mut out = Vec::with_capacity(2 * samples as usize);
    for i in 0..samples {
        let xi = xi_lo + (xi_hi - xi_lo) * i as f64 / (samples - 1) as f64;
        out.push(xi);
        out.push(r_lambda_hat(m, lambda, xi, &quad).map_err(text)?.norm() / scale);
    }
    Ok(out)
}

#[wasm_bindgen(js_name = classifyPoint)]
pub fn classify_point_js(kind: &str, n: u32, gamma: &str, m: u32, inv_p: &str, inv_q: &str) -> Result<String, JsValue> {
    classify(kind, n, gamma, m, inv_p, inv_q).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = typeSetSvg)]
pub fn type_set_svg_js(kind: &str, n: u32, gamma: &str, m: u32) -> Result<String, JsValue> {
    region_svg(kind, n, gamma, m).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = transformCurve)]
pub fn transform_curve_js(n: u32, k: u32, beta_re: f64, beta_im: f64, xi_max: f64, samples: u32) -> Result<Vec<f64>, JsValue> {
    transform_curve(n, k, beta_re, beta_im, xi_max, samples).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = oscillatoryProfile)]
pub fn oscillatory_profile_js(m: u32, lambda: f64, xi_lo: f64, xi_hi: f64, samples: u32) -> Result<Vec<f64>, JsValue> {
    oscillatory_profile(m, lambda, xi_lo, xi_hi, samples).map_err(|e| JsValue::from_str(&e))
}
