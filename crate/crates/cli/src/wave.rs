//! Boundary-response reduction for the wave problem: the measured response
//! at the support edge determines the Jost function through its Fourier
//! transform, f(k) = e^{ik}/A(k), which then feeds the scattering pipeline.

use num_complex::Complex64;
use scatter_core::error::{Error, Result};
use scatter_core::quad::{filon_cos, filon_sin};
use scatter_core::types::JostData;
use serde::{Deserialize, Serialize};

/// Sampled boundary response: an impulse (the direct arrival) plus a smooth
/// sampled part. For a potential supported in [0, 1] the impulse sits at
/// t = 1 with unit weight when the incident data is a delta.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryResponse {
    pub impulse_time: f64,
    pub impulse_weight: f64,
    /// uniform grid carrying the smooth part, starting at its first node
    pub ts: Vec<f64>,
    pub smooth: Vec<f64>,
}

/// Minimum |A(k)| relative to the impulse weight before the division is
/// declared unstable.
pub const RESPONSE_FLOOR: f64 = 1.0e-6;

/// A(k) = w e^{ik t0} + int a(t) e^{ikt} dt on one wavenumber.
fn transform_at(resp: &BoundaryResponse, k: f64) -> Complex64 {
    let h = resp.ts[1] - resp.ts[0];
    let t0 = resp.ts[0];
    let re = filon_cos(t0, h, &resp.smooth, k);
    let im = filon_sin(t0, h, &resp.smooth, k);
    Complex64::new(0.0, k * resp.impulse_time).exp() * resp.impulse_weight
        + Complex64::new(re, im)
}

fn laplace_at(resp: &BoundaryResponse, kappa: f64) -> f64 {
    // A(i kappa) = w e^{-kappa t0} + int a(t) e^{-kappa t} dt
    let mut acc = resp.impulse_weight * (-kappa * resp.impulse_time).exp();
    let h = resp.ts[1] - resp.ts[0];
    for (i, (t, a)) in resp.ts.iter().zip(&resp.smooth).enumerate() {
        let w = if i == 0 || i + 1 == resp.ts.len() {
            0.5 * h
        } else {
            h
        };
        acc += w * a * (-kappa * t).exp();
    }
    acc
}

/// Reduce a boundary response to Jost data on the given k-grid:
/// f(k) = e^{ik}/A(k), bound-state zeros located on the imaginary axis and
/// a resonance flag when f vanishes toward k = 0.
pub fn wave_reduction(resp: &BoundaryResponse, ks: &[f64]) -> Result<JostData> {
    if resp.ts.len() < 4 || resp.ts.len() != resp.smooth.len() {
        return Err(Error::MalformedGrid(
            "response needs matching grids with at least 4 nodes".into(),
        ));
    }
    let mut f = Vec::with_capacity(ks.len());
    for &k in ks {
        let a = transform_at(resp, k);
        if a.norm() < RESPONSE_FLOOR * resp.impulse_weight.abs().max(1.0) {
            return Err(Error::ZeroResponse {
                k,
                value: a.norm(),
            });
        }
        f.push(Complex64::new(0.0, k).exp() / a);
    }

    // zero search on the imaginary axis: g(kappa) = e^{-kappa}/A(i kappa)
    let g = |kappa: f64| (-kappa).exp() / laplace_at(resp, kappa);
    let kappa_floor = 1.0e-4;
    let kappa_max = 4.0;
    let f_origin = g(kappa_floor);
    let mut max_abs = f_origin.abs().max(1.0);
    let mut bound = Vec::new();
    let n_scan = 200;
    let mut prev = (kappa_floor, f_origin);
    for i in 1..=n_scan {
        let kappa = kappa_floor + (kappa_max - kappa_floor) * i as f64 / n_scan as f64;
        let val = g(kappa);
        max_abs = max_abs.max(val.abs());
        if prev.1.signum() != val.signum() {
            let (mut lo, mut hi, mut g_lo) = (prev.0, kappa, prev.1);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let gm = g(mid);
                if gm.signum() == g_lo.signum() {
                    lo = mid;
                    g_lo = gm;
                } else {
                    hi = mid;
                }
            }
            bound.push(0.5 * (lo + hi));
        }
        prev = (kappa, val);
    }
    let resonance = f_origin.abs() < 1.0e-3 * max_abs;

    Ok(JostData {
        ks: ks.to_vec(),
        f,
        fprime0: vec![],
        bound_ks: bound,
        fdot_at_bound: vec![],
        resonance,
    })
}
