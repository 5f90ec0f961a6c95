//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export wraps a native function returning JSON so the same code is
//! unit-tested off the browser.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use symlab::chi::{chi_direct, ChiExpansion};
use symlab::scaling::{fit_power_law, run_scan, FunctionSpec, ScanCell};
use symlab::symmetry::{symmetry_integral, symmetry_integral_continuous, symmetry_series};
use symlab::{GeneratorSpec, WindowParams};

/// Largest `N` the page may request; keeps a single call well under a second.
pub const MAX_N: usize = 200_000;
pub const MAX_CHI_POINTS: usize = 2_000;

fn parse_function(function: &str) -> Result<FunctionSpec, String> {
    let spec: FunctionSpec = function.parse().map_err(|e| format!("{e}"))?;
    if let FunctionSpec::Generator(GeneratorSpec::Custom(_)) = spec {
        return Err("custom generator files are not available in the browser".into());
    }
    Ok(spec)
}

fn check_n(n: usize) -> Result<(), String> {
    if n > MAX_N {
        return Err(format!("N = {n} exceeds the demo limit {MAX_N}"));
    }
    Ok(())
}

/// Per-x symmetry sums for one window plus both integrals.
pub fn symmetry_profile_json(function: &str, n: usize, h: usize, q: usize) -> Result<String, String> {
    check_n(n)?;
    let spec = parse_function(function)?;
    let params = WindowParams::new(n, h, q).map_err(|e| e.to_string())?;
    let (f, _) = spec.table(&params).map_err(|e| e.to_string())?;
    let series = symmetry_series(&f, &params).map_err(|e| e.to_string())?;
    let integral = symmetry_integral(&f, &params).map_err(|e| e.to_string())?;
    let continuous = symmetry_integral_continuous(&f, &params).map_err(|e| e.to_string())?;
    Ok(json!({
        "function": spec.to_string(),
        "x0": n + 1,
        "values": series.values,
        "integral": integral,
        "integral_continuous": continuous,
        "ratio": integral / (n as f64 * h as f64),
        "theorem_regime": params.theorem_regime(),
    })
    .to_string())
}

/// `chi_q(x)` by direct count and by its Fourier expansion on `x0 .. x0 + count`.
pub fn chi_compare_json(q: u64, h: u64, x0: i64, count: usize) -> Result<String, String> {
    if q == 0 || h == 0 {
        return Err("q and h must be >= 1".into());
    }
    if q > 5_000 {
        return Err("q is limited to 5000 in the demo".into());
    }
    if count == 0 || count > MAX_CHI_POINTS {
        return Err(format!("point count must be in 1..={MAX_CHI_POINTS}"));
    }
    let expansion = ChiExpansion::new(q, h);
    let xs: Vec<i64> = (x0..).take(count).collect();
    let direct: Vec<f64> = xs.iter().map(|&x| chi_direct(q, x, h).to_f64()).collect();
    let fourier: Vec<f64> = xs.iter().map(|&x| expansion.eval(x)).collect();
    let max_err = direct
        .iter()
        .zip(&fourier)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(json!({
        "x0": x0,
        "direct": direct,
        "fourier": fourier,
        "max_err": max_err,
        "terms": expansion.terms().len(),
    })
    .to_string())
}

/// `I / (N h)` over `N = 2^k_min .. 2^k_max` with `h = floor(N^exponent)`, and
/// the log-log fit.
pub fn scaling_curve_json(function: &str, k_min: u32, k_max: u32, exponent: f64) -> Result<String, String> {
    if !(1..=17).contains(&k_min) || !(k_min..=17).contains(&k_max) {
        return Err("need 1 <= k_min <= k_max <= 17".into());
    }
    if !(exponent > 0.0 && exponent < 1.0) {
        return Err("exponent must lie in (0, 1)".into());
    }
    let spec = parse_function(function)?;
    let grid: Vec<ScanCell> = (k_min..=k_max)
        .map(|k| {
            let n = 1usize << k;
            ScanCell {
                function: spec.clone(),
                n,
                h: ((n as f64).powf(exponent).floor() as usize).max(1),
                q: n,
            }
        })
        .collect();
    let rows = run_scan(&grid)
        .into_iter()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let fit: Value = match fit_power_law(&rows) {
        Ok(f) => serde_json::to_value(f).expect("fit serializes"),
        Err(_) => Value::Null,
    };
    Ok(json!({ "rows": rows, "fit": fit }).to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn symmetry_profile(function: &str, n: usize, h: usize, q: usize) -> Result<String, JsError> {
    js(symmetry_profile_json(function, n, h, q))
}

#[wasm_bindgen]
pub fn chi_compare(q: u32, h: u32, x0: i32, count: usize) -> Result<String, JsError> {
    js(chi_compare_json(q as u64, h as u64, x0 as i64, count))
}

#[wasm_bindgen]
pub fn scaling_curve(function: &str, k_min: u32, k_max: u32, exponent: f64) -> Result<String, JsError> {
    js(scaling_curve_json(function, k_min, k_max, exponent))
}
