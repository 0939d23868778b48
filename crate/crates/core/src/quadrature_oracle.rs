//! Brute-force coefficients by the left rectangle rule on a fine grid.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::laguerre_eval::{laguerre_table, EvalPolicy};
use crate::spectrum::LaguerreSpectrum;

/// Points per chunk of the parallel sum.
const CHUNK: usize = 512;

/// The fine step does not resolve the highest-order basis function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolutionWarning {
    pub fine_step: f64,
    pub bound: f64,
}

impl fmt::Display for ResolutionWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "fine step {} exceeds the resolution bound {} for the highest order",
            self.fine_step, self.bound
        )
    }
}

/// Coefficients together with a possible resolution warning.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureResult {
    pub spectrum: LaguerreSpectrum<f64>,
    pub warning: Option<ResolutionWarning>,
}

/// Largest step giving about 20 points per oscillation of `l_n(eta t)`.
///
/// Near the origin `l_n(x)` behaves like `J_0(2 sqrt((n + 1/2) x))`, whose
/// shortest wavelength in `x` is about `12.35 / (n + 1/2)`.
pub fn resolution_bound(eta: f64, n: usize) -> f64 {
    0.617 / ((n as f64 + 0.5) * eta)
}

/// `a_m = fine_step * sum_i f(t_i) sqrt(eta) l_m(eta t_i)` over
/// `t_i = i * fine_step < duration`.
pub fn rectangle_coefficients<F>(
    f: F,
    eta: f64,
    n: usize,
    fine_step: f64,
    duration: f64,
    policy: &EvalPolicy,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    if !(eta.is_finite() && eta > 0.0) {
        return Err(invalid(format!("eta must be positive, got {eta}")));
    }
    if !(fine_step.is_finite() && fine_step > 0.0 && duration.is_finite() && duration > 0.0) {
        return Err(invalid("fine step and duration must be positive"));
    }
    let points = (duration / fine_step).round() as usize;
    let scale = eta.sqrt() * fine_step;
    let partials: Vec<Vec<f64>> = (0..points.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; n + 1];
            for i in c * CHUNK..((c + 1) * CHUNK).min(points) {
                let t = i as f64 * fine_step;
                let v = f(t);
                if v == 0.0 {
                    continue;
                }
                let table = laguerre_table::<f64>(n, eta * t, policy)?;
                for (a, l) in acc.iter_mut().zip(table.values()) {
                    *a += v * l;
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut coeffs = vec![0.0; n + 1];
    for p in &partials {
        for (a, x) in coeffs.iter_mut().zip(p) {
            *a += x;
        }
    }
    coeffs.iter_mut().for_each(|a| *a *= scale);
    let bound = resolution_bound(eta, n);
    let warning = (fine_step > bound).then_some(ResolutionWarning { fine_step, bound });
    Ok(QuadratureResult { spectrum: LaguerreSpectrum::new(coeffs, eta, duration)?, warning })
}
