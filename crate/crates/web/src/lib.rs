//! Browser bindings for the `www/` demo page.
//!
//! Every export takes plain numbers and strings and returns a JSON string.
//! The `*_json` functions hold the logic and run natively, which is how the
//! tests exercise them.

use quasitour::census::{arc_profiles, ArcClass};
use quasitour::flagcalc::builtin_identity_suite;
use quasitour::format::{report_json, search_json};
use quasitour::generators;
use quasitour::qrlab::{minimize_density, qr_report, CensusMode, Thresholds};
use quasitour::{rational_to_f64, Tournament};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest tournament the page will build.
pub const MAX_VERTICES: u32 = 400;
/// Largest order for the search, which runs on the page's only thread.
pub const MAX_SEARCH_VERTICES: u32 = 40;

fn build(model: &str, param: u32, seed: u32) -> Result<Tournament, String> {
    if param > MAX_VERTICES {
        return Err(format!("at most {MAX_VERTICES} vertices in the browser"));
    }
    let n = param as usize;
    let t = match model {
        "random" => generators::random_tournament(n, seed.into()),
        "transitive" => generators::transitive(n),
        "paley" => generators::paley(param.into()).map_err(|e| e.to_string())?,
        "rotational" => generators::rotational(n).map_err(|e| e.to_string())?,
        "transitive-flip" => {
            let t = generators::transitive(n);
            if n < 2 {
                t
            } else {
                generators::flip_arcs(&t, &[(0, n - 1)]).map_err(|e| e.to_string())?
            }
        }
        other => return Err(format!("unknown model {other:?}")),
    };
    Ok(t)
}

fn source(model: &str, param: u32, seed: u32) -> Value {
    let seed = if model == "random" { json!(seed) } else { Value::Null };
    json!({ "generator": model, "params": { "n": param }, "seed": seed })
}

/// Exact report with `s_max = 4`.
pub fn analyze_json(model: &str, param: u32, seed: u32) -> Result<Value, String> {
    let t = build(model, param, seed)?;
    let report = qr_report(&t, 4, CensusMode::Exact, Thresholds::default_for(t.n())).map_err(|e| e.to_string())?;
    Ok(report_json(&report, source(model, param, seed)))
}

/// `count / (n-2) - 1/4` of one arc class for every pair, as a row-major
/// `n × n` matrix; both cells of a pair hold the value of its arc and the
/// diagonal is 0.
pub fn heatmap_json(model: &str, param: u32, seed: u32, class: &str) -> Result<Value, String> {
    let class = ArcClass::ALL
        .into_iter()
        .find(|c| c.name() == class)
        .ok_or_else(|| format!("unknown arc class {class:?}"))?;
    let t = build(model, param, seed)?;
    let n = t.n();
    if n < 3 {
        return Err("need at least 3 vertices".into());
    }
    let mut cells = vec![0.0f64; n * n];
    for ((u, v), p) in arc_profiles(&t) {
        let d = rational_to_f64(&p.fraction(class)) - 0.25;
        cells[u * n + v] = d;
        cells[v * n + u] = d;
    }
    Ok(json!({ "n": n, "class": class.name(), "cells": cells }))
}

pub fn minimize_json(k: u32, n: u32, seed: u32, restarts: u32, steps: u32) -> Result<Value, String> {
    if n > MAX_SEARCH_VERTICES {
        return Err(format!("at most {MAX_SEARCH_VERTICES} vertices for the search"));
    }
    let r = minimize_density(k as usize, n as usize, seed.into(), restarts as usize, steps.into())
        .map_err(|e| e.to_string())?;
    Ok(search_json(&r))
}

pub fn identities_json() -> Result<Value, String> {
    let reports = builtin_identity_suite().map_err(|e| e.to_string())?;
    Ok(reports
        .iter()
        .map(|r| json!({ "name": r.name, "size": r.size, "equal": r.equal }))
        .collect())
}

fn finish(v: Result<Value, String>) -> Result<String, JsError> {
    v.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn analyze(model: &str, param: u32, seed: u32) -> Result<String, JsError> {
    finish(analyze_json(model, param, seed))
}

#[wasm_bindgen]
pub fn heatmap(model: &str, param: u32, seed: u32, class: &str) -> Result<String, JsError> {
    finish(heatmap_json(model, param, seed, class))
}

#[wasm_bindgen]
pub fn minimize(k: u32, n: u32, seed: u32, restarts: u32, steps: u32) -> Result<String, JsError> {
    finish(minimize_json(k, n, seed, restarts, steps))
}

#[wasm_bindgen]
pub fn identities() -> Result<String, JsError> {
    finish(identities_json())
}
