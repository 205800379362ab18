//! WebAssembly bindings for the demo page in `www/`.
//!
//! Each exported function returns a JSON string. The `*_json` functions are
//! plain Rust so native tests can call them.

use qannulus::dilation::{build_any, default_probes, sample_pair, verify_dilation};
use qannulus::estimate::{bound_constant, crossover_radius, known_bounds, CITED_LOWER, CITED_UPPER};
use qannulus::numkernel::{eigenvalues, singular_values};
use qannulus::search::cross_witness;
use qannulus::tolerances::PROPERTY_TOL;
use qannulus::{seeds, Radius, C64};
use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

const MAX_DIM: usize = 12;
const MAX_POINTS: usize = 2000;

fn radius(r: f64) -> Result<Radius, String> {
    Radius::new(r).map_err(|_| "r must exceed 1 or be inf".to_string())
}

fn points(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Serialize)]
struct CurvePoint {
    r: f64,
    #[serde(rename = "C_r")]
    c_r: f64,
    upper: f64,
}

/// `C(r)` and the envelope `[2, min(C(r), 1 + √2)]` on `n` log-spaced radii.
pub fn bound_curve_json(r_min: f64, r_max: f64, n: usize) -> Result<String, String> {
    radius(r_min)?;
    if !(r_max.is_finite() && r_max > r_min) {
        return Err("need 1 < r_min < r_max < inf".into());
    }
    if !(2..=MAX_POINTS).contains(&n) {
        return Err(format!("points must be in 2..={MAX_POINTS}"));
    }
    let (a, b) = (r_min.ln(), r_max.ln());
    let curve: Vec<CurvePoint> = (0..n)
        .map(|i| {
            let r = (a + (b - a) * i as f64 / (n - 1) as f64).exp();
            let kb = known_bounds(Radius::Finite(r));
            CurvePoint { r, c_r: kb.c_r, upper: kb.upper }
        })
        .collect();
    Ok(json!({
        "curve": curve,
        "lower": CITED_LOWER,
        "cited_upper": CITED_UPPER,
        "crossover": crossover_radius(),
        "C_inf": bound_constant(Radius::Infinite),
    })
    .to_string())
}

/// Samples a pair of type `r` (`r = Infinity` for the cross), builds its
/// dilation and reports spectra, singular values of `Ẑ` and the property
/// residuals.
pub fn dilation_sample_json(r: f64, dim: usize, seed: u64) -> Result<String, String> {
    let r = radius(r)?;
    let min_dim = if r.is_infinite() { 2 } else { 1 };
    if !(min_dim..=MAX_DIM).contains(&dim) {
        return Err(format!("dim must be in {min_dim}..={MAX_DIM}"));
    }
    let mut rng = seeds::trial_rng(seed, 0);
    let pair = sample_pair(r, dim, seed, &mut rng).map_err(|e| e.to_string())?;
    let d = build_any(&pair).map_err(|e| e.to_string())?;
    let report = verify_dilation(&d, &default_probes(&mut rng), PROPERTY_TOL);
    let spectrum = |m| eigenvalues(m).map(|v| points(&v)).map_err(|e| e.to_string());
    let w_star = pair.w().adjoint();
    Ok(json!({
        "r": r,
        "dim": dim,
        "seed": seed,
        "spectrum_z": spectrum(pair.z())?,
        "spectrum_w_star": spectrum(&w_star)?,
        "spectrum_z_hat": spectrum(&d.z_hat)?,
        "singular_values_z_hat": singular_values(&d.z_hat).map_err(|e| e.to_string())?,
        "report": report,
    })
    .to_string())
}

/// The cross pair `Z = W = (1 − eps)·[[0, 1], [0, 0]]` with `f = z + w`.
pub fn cross_ratio_json(eps: f64) -> Result<String, String> {
    let w = cross_witness(eps).map_err(|e| e.to_string())?;
    Ok(json!({ "eps": eps, "ratio": w.ratio, "certified_ratio": w.certified_ratio }).to_string())
}

#[wasm_bindgen]
pub fn bound_curve(r_min: f64, r_max: f64, n: usize) -> Result<String, JsError> {
    bound_curve_json(r_min, r_max, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn dilation_sample(r: f64, dim: usize, seed: u32) -> Result<String, JsError> {
    dilation_sample_json(r, dim, seed as u64).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn cross_ratio(eps: f64) -> Result<String, JsError> {
    cross_ratio_json(eps).map_err(|e| JsError::new(&e))
}
