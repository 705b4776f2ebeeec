//! Browser bindings: parameter sweeps returned as flat row-major tables.

use mixspin::{run_sweep, Axis, ModelSpec, Parameter, SweepRequest, SweepResult};
use wasm_bindgen::prelude::*;

/// Largest ring offered to the browser; one N=8 point already takes
/// noticeable time in wasm.
pub const MAX_SITES: usize = 8;
pub const MAX_STEPS: usize = 400;

/// A sweep result in row-major order.
#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    columns: Vec<String>,
    values: Vec<f64>,
}

#[wasm_bindgen]
impl Curve {
    /// Column names joined by commas.
    #[wasm_bindgen(getter)]
    pub fn columns(&self) -> String {
        self.columns.join(",")
    }

    #[wasm_bindgen(getter)]
    pub fn width(&self) -> usize {
        self.columns.len()
    }

    #[wasm_bindgen(getter)]
    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }
}

impl Curve {
    pub fn column_names(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.columns.len())
    }

    fn from_result(result: &SweepResult) -> Self {
        Curve {
            columns: result.columns(),
            values: result.rows.iter().flat_map(SweepResult::row_values).collect(),
        }
    }
}

fn check_size(n: usize, steps: usize) -> mixspin::Result<()> {
    if n > MAX_SITES {
        return Err(mixspin::Error::InvalidModel(format!("the demo is limited to N <= {MAX_SITES}, got N={n}")));
    }
    if steps > MAX_STEPS {
        return Err(mixspin::Error::InvalidSweep(format!("the demo is limited to {MAX_STEPS} steps, got {steps}")));
    }
    Ok(())
}

fn sweep(req: SweepRequest) -> mixspin::Result<Curve> {
    check_size(req.model.n_sites, req.axis1.steps)?;
    run_sweep(&req).map(|r| Curve::from_result(&r))
}

pub fn temperature_sweep(n: usize, j1: f64, j2: f64, b: f64, tmin: f64, tmax: f64, steps: usize) -> mixspin::Result<Curve> {
    let model = ModelSpec::nn_ring(n).with_j1(j1).with_j2(j2).with_field(b);
    sweep(SweepRequest::new(model, Axis::new(Parameter::Temperature, tmin, tmax, steps)?))
}

pub fn j2_sweep(n: usize, j1: f64, t: f64, j2max: f64, steps: usize) -> mixspin::Result<Curve> {
    let model = ModelSpec::nn_ring(n).with_j1(j1);
    sweep(SweepRequest::new(model, Axis::new(Parameter::J2, 0.0, j2max, steps)?).with_temperature(t))
}

pub fn field_sweep(n: usize, j1: f64, j2: f64, t: f64, bmax: f64, steps: usize) -> mixspin::Result<Curve> {
    let model = ModelSpec::nn_ring(n).with_j1(j1).with_j2(j2);
    sweep(SweepRequest::new(model, Axis::new(Parameter::FieldB, 0.0, bmax, steps)?).with_temperature(t))
}

fn to_js(e: mixspin::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Negativities, energy and `ln Z` against temperature.
#[wasm_bindgen]
pub fn temperature_curve(n: usize, j1: f64, j2: f64, b: f64, tmin: f64, tmax: f64, steps: usize) -> Result<Curve, JsError> {
    temperature_sweep(n, j1, j2, b, tmin, tmax, steps).map_err(to_js)
}

/// Sweep of the next-nearest coupling from 0 at fixed temperature.
#[wasm_bindgen]
pub fn j2_curve(n: usize, j1: f64, t: f64, j2max: f64, steps: usize) -> Result<Curve, JsError> {
    j2_sweep(n, j1, t, j2max, steps).map_err(to_js)
}

/// Sweep of the field from 0 at fixed temperature.
#[wasm_bindgen]
pub fn field_curve(n: usize, j1: f64, j2: f64, t: f64, bmax: f64, steps: usize) -> Result<Curve, JsError> {
    field_sweep(n, j1, j2, t, bmax, steps).map_err(to_js)
}
