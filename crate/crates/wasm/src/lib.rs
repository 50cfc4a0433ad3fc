//! WebAssembly bindings for the single-page demo in `www/`.
//!
//! Every export has a plain-Rust twin returning `Result<_, String>` so the
//! logic is testable without a JavaScript host.

use omgbh_core::blackhole::c_params_from_a;
use omgbh_core::{
    a_channel, b_channel, c_channel, capacity_region, capacity_report, inverse_map, BlackHoleParams,
    BlackHolePoint, CapacityStatus, LogBase, OneModeChannel, Parity, DEFAULT_TOL,
};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Region codes written by [`region_grid`].
pub const CODE_NOT_CP: u8 = 0;

pub fn status_code(status: CapacityStatus) -> u8 {
    match status {
        CapacityStatus::Zero => 1,
        CapacityStatus::Exact => 2,
        CapacityStatus::PositiveLowerBound => 3,
        CapacityStatus::Unknown => 4,
        CapacityStatus::Infinite => 5,
    }
}

fn number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| {
        Value::String(if x > 0.0 { "inf" } else { "-inf" }.into())
    })
}

fn describe(ch: &OneModeChannel, base: LogBase) -> Value {
    let (tau, y) = (ch.tau(), ch.y());
    let region = capacity_region(tau, y, DEFAULT_TOL).map(|s| s.to_string()).ok();
    let bound = capacity_report(tau, y, base).ok().map(|r| number(r.lower_bound));
    json!({
        "tau": number(tau),
        "y": number(y),
        "class": ch.classify().to_string(),
        "region": region,
        "lower_bound": bound,
    })
}

/// Channels seen by modes `a`, `b` and `c` for black hole parameters `(r, s)`.
pub fn channels_json(r: f64, s: f64, base: &str) -> Result<String, String> {
    let base: LogBase = base.parse().map_err(|e: omgbh_core::Error| e.to_string())?;
    let p = BlackHoleParams::new(r, s).map_err(|e| e.to_string())?;
    Ok(json!({
        "r": r,
        "s": s,
        "a": describe(&a_channel(&p), base),
        "b": describe(&b_channel(&p), base),
        "c": describe(&c_channel(&p), base),
    })
    .to_string())
}

/// Region codes over `[0, tau_max] × [0, y_max]`, `n × n` points, rows of
/// increasing `y` with `τ` varying fastest.
pub fn region_codes(tau_max: f64, y_max: f64, n: usize) -> Result<Vec<u8>, String> {
    if !(tau_max > 0.0 && y_max > 0.0) || !(2..=2048).contains(&n) {
        return Err("need positive window and 2 <= n <= 2048".into());
    }
    let step = |max: f64, i: usize| max * i as f64 / (n - 1) as f64;
    let mut codes = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let code = capacity_region(step(tau_max, i), step(y_max, j), DEFAULT_TOL)
                .map(status_code)
                .unwrap_or(CODE_NOT_CP);
            codes.push(code);
        }
    }
    Ok(codes)
}

/// Both branches of the map from an outgoing point to the channel across the horizon.
pub fn map_json(tau_a: f64, y_a: f64) -> Result<String, String> {
    let pt = BlackHolePoint::new(tau_a, y_a).map_err(|e| e.to_string())?;
    let branch = |parity| -> Result<Value, String> {
        let Some(p) = inverse_map(&pt, parity).map_err(|e| e.to_string())? else {
            return Ok(Value::Null);
        };
        let (tau_c, y_c) = c_params_from_a(&pt, parity)
            .map_err(|e| e.to_string())?
            .ok_or("missing image")?;
        Ok(json!({ "r": p.r(), "s": p.s(), "tau_c": tau_c, "y_c": y_c }))
    };
    Ok(json!({
        "tau_a": tau_a,
        "y_a": y_a,
        "even": branch(Parity::Even)?,
        "odd": branch(Parity::Odd)?,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn channels(r: f64, s: f64, base: &str) -> Result<String, JsError> {
    channels_json(r, s, base).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn region_grid(tau_max: f64, y_max: f64, n: usize) -> Result<Vec<u8>, JsError> {
    region_codes(tau_max, y_max, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn map_a_to_c(tau_a: f64, y_a: f64) -> Result<String, JsError> {
    map_json(tau_a, y_a).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn channels_at_degradable_point() {
        let v: Value = serde_json::from_str(&channels_json(std::f64::consts::FRAC_PI_2, std::f64::consts::PI, "2").unwrap()).unwrap();
        assert!((v["a"]["tau"].as_f64().unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(v["a"]["class"], "CAmp");
        assert_eq!(v["a"]["region"], "Exact");
        assert_eq!(v["b"]["class"], "D");
        assert!(channels_json(1.0, 0.5, "2").is_err());
        assert!(channels_json(0.5, 1.0, "10").is_err());
    }

    #[test]
    fn identity_reports_infinite_bound() {
        let v: Value = serde_json::from_str(&channels_json(std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2, "e").unwrap()).unwrap();
        assert_eq!(v["a"]["class"], "B2Identity");
        assert_eq!(v["a"]["lower_bound"], "inf");
    }

    #[test]
    fn region_grid_layout() {
        let codes = region_codes(1.0, 1.0, 3).unwrap();
        assert_eq!(codes.len(), 9);
        // (τ, y) = (1, 0) is the identity; (0, 0) is not CP.
        assert_eq!(codes[2], status_code(CapacityStatus::Infinite));
        assert_eq!(codes[0], CODE_NOT_CP);
        assert_eq!(codes[6], status_code(CapacityStatus::Zero));
        assert!(region_codes(1.0, 1.0, 1).is_err());
    }

    #[test]
    fn map_examples() {
        let v: Value = serde_json::from_str(&map_json(1.0, 0.0).unwrap()).unwrap();
        assert!(v["even"]["tau_c"].as_f64().unwrap().abs() < 1e-12);
        assert!((v["even"]["y_c"].as_f64().unwrap() - 1.0).abs() < 1e-12);
        let v: Value = serde_json::from_str(&map_json(1.0, 2.0).unwrap()).unwrap();
        assert!(v["odd"].is_null());
        assert!(map_json(3.0, 5.0).is_err());
    }
}
