//! WebAssembly bindings behind `www/index.html`.
//!
//! Every export takes and returns JSON strings so the page needs no glue
//! beyond `JSON.parse`. The `*_json` functions hold the logic and are plain
//! Rust, which keeps them testable off the browser.

use std::f64::consts::TAU;

use serde::Serialize;
use wasm_bindgen::prelude::*;

use schwarz_lab::bounds::{self, EquationTag};
use schwarz_lab::sharpness::{self, FamilySpec};
use schwarz_lab::{BoundaryPoint, DiskSelfMap, Error};

/// `|f'(e^{iθ})|` around the circle next to the order-k bound.
#[derive(Debug, Serialize)]
pub struct Profile {
    pub theta: Vec<f64>,
    pub speed: Vec<f64>,
    /// `(k - 1) + 2 / (1 + |a_k|)`
    pub bound: f64,
    pub order: u32,
    pub leading_modulus: f64,
    pub min_speed: f64,
    pub argmin_theta: f64,
    /// Images `f(e^{iθ})` as `[re, im]`, for drawing the wrapped circle.
    pub image: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize)]
pub struct ProbeView {
    pub radii: Vec<f64>,
    pub quotients: Vec<f64>,
    pub rung_bounds: Vec<f64>,
    pub limit_bound: f64,
    pub boundary_derivative: f64,
    pub all_hold: bool,
}

#[derive(Debug, Serialize)]
pub struct SharpnessView {
    pub min_slack: f64,
    pub argmin_theta: f64,
    pub map: DiskSelfMap,
    pub extremal_distance: Option<f64>,
    pub evaluations: usize,
    pub trace: Vec<[f64; 2]>,
}

pub fn profile_json(map: &str, points: usize) -> Result<String, Error> {
    let f = DiskSelfMap::from_json(map)?;
    let points = points.clamp(8, 8192);
    let lo = f.leading_order();
    let mut profile = Profile {
        theta: Vec::with_capacity(points),
        speed: Vec::with_capacity(points),
        bound: bounds::order_k_boundary_bound(lo.order.max(1), lo.coefficient.norm()),
        order: lo.order,
        leading_modulus: lo.coefficient.norm(),
        min_speed: f64::INFINITY,
        argmin_theta: 0.0,
        image: Vec::with_capacity(points),
    };
    for i in 0..points {
        let theta = TAU * i as f64 / points as f64;
        let b = BoundaryPoint::new(theta)?;
        let speed = f.boundary_derivative(b).norm();
        if speed < profile.min_speed {
            profile.min_speed = speed;
            profile.argmin_theta = theta;
        }
        let w = f.eval_boundary(b);
        profile.theta.push(theta);
        profile.speed.push(speed);
        profile.image.push([w.re, w.im]);
    }
    Ok(serde_json::to_string(&profile)?)
}

pub fn probe_json(map: &str, angle: f64, depth: u32) -> Result<String, Error> {
    let f = DiskSelfMap::from_json(map)?;
    let p = bounds::sequence_probe(&f, BoundaryPoint::new(angle)?, depth)?;
    let all_hold = p.rung_reports().iter().all(bounds::SlackReport::holds);
    Ok(serde_json::to_string(&ProbeView {
        radii: p.radii,
        quotients: p.quotients,
        rung_bounds: p.rung_bounds,
        limit_bound: p.limit_bound,
        boundary_derivative: p.boundary_derivative,
        all_hold,
    })?)
}

/// Sharpness search for the boundary bound over maps `z^k` times `free`
/// Blaschke factors.
pub fn sharpness_json(k: u32, free: u32, budget: usize, seed: u32) -> Result<String, Error> {
    let family = FamilySpec::new(k + free, k)?;
    let equation = if k == 1 {
        EquationTag::Eq1
    } else {
        EquationTag::Eq16
    };
    let r = sharpness::minimize_slack(&family, equation, budget, u64::from(seed))?;
    Ok(serde_json::to_string(&SharpnessView {
        min_slack: r.min_slack,
        argmin_theta: r.argmin_boundary_angle,
        extremal_distance: sharpness::extremal_distance(&r),
        evaluations: r.evaluations,
        trace: r
            .trace
            .iter()
            .map(|t| [t.iteration as f64, t.best_slack])
            .collect(),
        map: r.argmin_map,
    })?)
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Boundary speed profile of a map given as JSON.
#[wasm_bindgen(js_name = boundaryProfile)]
pub fn boundary_profile(map: &str, points: usize) -> Result<String, JsError> {
    profile_json(map, points).map_err(js)
}

/// Radial quotient ladder toward `e^{i angle}`.
#[wasm_bindgen(js_name = sequenceProbe)]
pub fn sequence_probe(map: &str, angle: f64, depth: u32) -> Result<String, JsError> {
    probe_json(map, angle, depth).map_err(js)
}

/// Multistart search for the extremal map of the order-`k` boundary bound.
#[wasm_bindgen(js_name = sharpnessSearch)]
pub fn sharpness_search(k: u32, free: u32, budget: usize, seed: u32) -> Result<String, JsError> {
    sharpness_json(k, free, budget, seed).map_err(js)
}
