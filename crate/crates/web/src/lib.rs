//! Browser bindings. Each export takes plain numbers and returns a JSON document.

use kahlerflow::complexifier::{Complexifier, TorusForm};
use kahlerflow::flows::{flow_f, flow_h, flow_rk4, phase_distance};
use kahlerflow::halfform::{density, density_frame_oracle};
use kahlerflow::hilbert::{apply_cst, gram_mixed, matrix_element_basis, QuadratureOptions};
use kahlerflow::lie::LieAlgebra;
use kahlerflow::polarization::{kahler_metric_w, min_eigenvalue};
use kahlerflow::{sampling, RVec, Result, TimeParams, C64};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn complexifier(alg: &LieAlgebra, soft: bool) -> Result<Complexifier> {
    if soft {
        Complexifier::softened(alg)
    } else {
        Ok(Complexifier::quadratic())
    }
}

/// Smallest eigenvalue of `W`, the half-form density and its frame-oracle discrepancy along
/// the ray `y = r (sin a, 0, cos a)`.
pub fn kahler_profile(tau: C64, sigma: C64, f0: f64, soft: bool, angle: f64, radius: f64, steps: usize) -> Result<Value> {
    let alg = LieAlgebra::su2();
    let h = complexifier(&alg, soft)?;
    let f = TorusForm::scalar(&alg, f0)?;
    let params = TimeParams::new(tau, sigma)?;
    let dir = RVec::from_column_slice(&[angle.sin(), 0.0, angle.cos()]);
    let mut rows = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let r = radius * i as f64 / steps.max(1) as f64;
        let y = &dir * r;
        let w = kahler_metric_w(&alg, &h, &f, &params, &y)?;
        let d = density(&alg, &h, &f, &params, &y)?;
        let o = density_frame_oracle(&alg, &h, &f, &params, &y)?;
        rows.push(json!({"r": r, "min_eig": min_eigenvalue(&w), "density": d, "oracle_rel_err": (o - d).norm() / d}));
    }
    Ok(json!({"rows": rows}))
}

/// Gram matrix of `U_{0,sigma} pi^lambda_{jk}` for all spins up to `max_spin`.
pub fn unitarity_table(sigma: C64, f0: f64, max_spin: f64) -> Result<Value> {
    let alg = LieAlgebra::su2();
    let f = TorusForm::scalar(&alg, f0)?;
    let params = TimeParams::mixed(sigma)?;
    let h = Complexifier::quadratic();
    let basis = matrix_element_basis(max_spin.clamp(0.0, 2.0));
    let sections = basis.iter().map(|(_, _, _, v)| apply_cst(&alg, &h, &f, &params, v)).collect::<Result<Vec<_>>>()?;
    let gram = gram_mixed(&alg, &sections, &QuadratureOptions::default())?;
    let mut off: f64 = 0.0;
    let mut rows = Vec::new();
    for (a, (irrep, j, k, _)) in basis.iter().enumerate() {
        for b in 0..basis.len() {
            if a != b {
                off = off.max(gram.matrix[(a, b)].norm());
            }
        }
        let n = gram.matrix[(a, a)].re;
        rows.push(json!({"spin": irrep.spin(), "row": j, "column": k, "norm_squared": n, "dim_times_norm": n * irrep.dim() as f64}));
    }
    Ok(json!({"rows": rows, "max_off_diagonal": off, "refinement_change": gram.estimate, "nodes": gram.nodes}))
}

/// Commutator of the two flows and the deviation of the closed forms from RK4 at random points.
pub fn flow_check(t: f64, s: f64, f0: f64, soft: bool, samples: usize, seed: u64) -> Result<Value> {
    let alg = LieAlgebra::su2();
    let h = complexifier(&alg, soft)?;
    let f = TorusForm::scalar(&alg, f0)?;
    let mut rng = sampling::rng(seed);
    let (mut comm, mut rk): (f64, f64) = (0.0, 0.0);
    for _ in 0..samples {
        let p = sampling::phase_point(&mut rng, &alg, 3.0);
        let a = flow_h(&alg, &h, t, &flow_f(&alg, &f, s, &p));
        let b = flow_f(&alg, &f, s, &flow_h(&alg, &h, t, &p));
        comm = comm.max(phase_distance(&a, &b));
        rk = rk.max(phase_distance(&flow_rk4(&alg, &|y| h.gradient(y), t, &p, 200), &flow_h(&alg, &h, t, &p)));
        rk = rk.max(phase_distance(&flow_rk4(&alg, &|y| f.apply(y), s, &p, 200), &flow_f(&alg, &f, s, &p)));
    }
    Ok(json!({"commutator": comm, "rk4_deviation": rk, "samples": samples}))
}

fn to_js(r: Result<Value>) -> std::result::Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = kahlerProfile)]
#[allow(clippy::too_many_arguments)]
pub fn kahler_profile_js(tau_re: f64, tau_im: f64, sigma_re: f64, sigma_im: f64, f0: f64, soft: bool, angle: f64, radius: f64, steps: usize) -> std::result::Result<String, JsError> {
    to_js(kahler_profile(C64::new(tau_re, tau_im), C64::new(sigma_re, sigma_im), f0, soft, angle, radius, steps.min(400)))
}

#[wasm_bindgen(js_name = unitarityTable)]
pub fn unitarity_table_js(sigma_re: f64, sigma_im: f64, f0: f64, max_spin: f64) -> std::result::Result<String, JsError> {
    to_js(unitarity_table(C64::new(sigma_re, sigma_im), f0, max_spin))
}

#[wasm_bindgen(js_name = flowCheck)]
pub fn flow_check_js(t: f64, s: f64, f0: f64, soft: bool, samples: usize, seed: u32) -> std::result::Result<String, JsError> {
    to_js(flow_check(t, s, f0, soft, samples.min(2000), seed as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_is_positive_and_matches_oracle() {
        let v = kahler_profile(C64::new(0.0, 1.0), C64::new(0.0, 1.0), 1.0, false, 0.7, 3.0, 6).unwrap();
        for row in v["rows"].as_array().unwrap() {
            assert!(row["min_eig"].as_f64().unwrap() > 0.0);
            assert!(row["oracle_rel_err"].as_f64().unwrap() < 1e-8);
        }
        assert!(kahler_profile(C64::new(1.0, 0.0), C64::new(0.0, 1.0), 1.0, false, 0.0, 1.0, 2).is_err());
    }

    #[test]
    fn unitarity_rows() {
        let v = unitarity_table(C64::new(0.0, 1.0), 1.0, 1.0).unwrap();
        for row in v["rows"].as_array().unwrap() {
            assert!((row["dim_times_norm"].as_f64().unwrap() - 1.0).abs() < 5e-7);
        }
        assert!(v["max_off_diagonal"].as_f64().unwrap() < 5e-7);
    }

    #[test]
    fn flows_commute() {
        let v = flow_check(1.2, -0.8, 1.0, true, 20, 3).unwrap();
        assert!(v["commutator"].as_f64().unwrap() < 1e-9);
        assert!(v["rk4_deviation"].as_f64().unwrap() < 1e-5);
    }
}
