//! Three superkit operations exported to the browser. Each returns a JSON string.

use serde_json::json;
use wasm_bindgen::prelude::*;

use superkit::algebra_core::{chiral_kernel, dbar_null_space, CHIRAL_PARAMS};
use superkit::repdecomp::{half_str, parse_half, tensor_sym_decompose};
use superkit::report::{self, closed_form_mismatches};
use superkit::scalar::Q;
use superkit::spin_geometry::{gamma_pair, parse_rational, Momentum};

fn momentum(s: &str) -> Result<Momentum<Q>, String> {
    let parts: Vec<Q> = s.split(',').map(parse_rational).collect::<Result<_, _>>()?;
    let p: [Q; 4] = parts.try_into().map_err(|v: Vec<Q>| format!("momentum needs 4 entries, got {}", v.len()))?;
    Ok(Momentum { p })
}

pub fn decompose_json(alpha: &str, beta: &str) -> Result<String, String> {
    let a = parse_half(alpha).map_err(|e| e.to_string())?;
    let b = parse_half(beta).map_err(|e| e.to_string())?;
    let d = tensor_sym_decompose(a, b);
    Ok(json!({
        "alpha": half_str(a as i64),
        "beta": half_str(b as i64),
        "spins": d.to_json(),
        "dimension": d.dimension(),
    })
    .to_string())
}

pub fn chiral_kernel_json(p: &str) -> Result<String, String> {
    let p = momentum(p)?;
    let b = gamma_pair(&p);
    let kern = dbar_null_space(&b, 0.0);
    let closed = chiral_kernel(&b);
    Ok(json!({
        "momentum": p.to_json(),
        "kernel_dim": kern.len(),
        "closed_form_mismatches": closed_form_mismatches(&kern, &closed),
        "basis": CHIRAL_PARAMS.iter().zip(&closed).map(|(n, v)| json!({"parameter": n, "vector": v.to_json()})).collect::<Vec<_>>(),
    })
    .to_string())
}

pub fn pipeline_json(mass: &str, p: &str) -> Result<String, String> {
    let m = parse_rational(mass)?;
    if m <= Q::from_integer(0.into()) {
        return Err(format!("mass must be positive, got {mass}"));
    }
    let p = momentum(p)?;
    let rep = report::cmd_pipeline(&m, &p, &report::default_seeds(), report::DEFAULT_TOL).map_err(|e| e.to_string())?;
    Ok(rep.to_json().to_string())
}

#[wasm_bindgen]
pub fn decompose(alpha: &str, beta: &str) -> Result<String, JsError> {
    decompose_json(alpha, beta).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = chiralKernel)]
pub fn chiral_kernel_js(p: &str) -> Result<String, JsError> {
    chiral_kernel_json(p).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn pipeline(mass: &str, p: &str) -> Result<String, JsError> {
    pipeline_json(mass, p).map_err(|e| JsError::new(&e))
}
