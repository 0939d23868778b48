//! Exact operations on Laguerre coefficient sequences.
//!
//! With `l_m` the scaled Laguerre functions and `x = eta * tau`:
//!
//! * shift by `tau`: `b_m = sum_{j<=m} (a_{m-j} - a_{m-j-1}) l_j(x)`
//! * conjugation about `tau`: `b_j = sum_m (a_m - a_{m-1}) l_{m+j}(x)`,
//!   the coefficients of `f(tau - t)` on `[0, tau]`
//! * truncation after `tau`: conjugation applied twice.
//!
//! Shift is causal, so its first `n` outputs need only the first `n` inputs.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{invalid, Result};
use crate::fft::{convolve, correlate};
use crate::laguerre_eval::{laguerre_table, EvalPolicy};
use crate::real::Real;
use crate::spectrum::LaguerreSpectrum;

/// Offset and output length of an operator application.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorParams {
    pub tau: f64,
    /// Defaults to the input length.
    pub output_len: Option<usize>,
}

impl OperatorParams {
    pub fn new(tau: f64) -> Self {
        OperatorParams { tau, output_len: None }
    }

    pub fn with_len(tau: f64, output_len: usize) -> Self {
        OperatorParams { tau, output_len: Some(output_len) }
    }
}

/// Shift kernel on raw slices; `a` is zero beyond its end.
pub fn shift_slice<T: Real>(a: &[T], table: &[T], out_len: usize) -> Vec<T> {
    let d = differences(a, out_len);
    convolve(&d, table, out_len)
}

/// Conjugation kernel on raw slices. `table` must hold `a.len() + out_len`
/// entries.
pub fn conjugate_slice<T: Real>(a: &[T], table: &[T], out_len: usize) -> Vec<T> {
    let d = differences(a, a.len() + 1);
    correlate(&d, table, out_len)
}

/// `d_m = a_m - a_{m-1}` for `m < len`, with `a` zero outside its range.
fn differences<T: Real>(a: &[T], len: usize) -> Vec<T> {
    (0..len)
        .map(|m| {
            let cur = a.get(m).copied().unwrap_or_else(T::zero);
            let prev = if m == 0 { T::zero() } else { a.get(m - 1).copied().unwrap_or_else(T::zero) };
            cur - prev
        })
        .collect()
}

/// Extend with exact zeros to `new_len`.
pub fn zero_pad<T: Real>(a: &LaguerreSpectrum<T>, new_len: usize) -> Result<LaguerreSpectrum<T>> {
    if new_len < a.len() {
        return Err(invalid(format!("cannot pad {} coefficients down to {new_len}", a.len())));
    }
    let mut c = a.coeffs().to_vec();
    c.resize(new_len, T::zero());
    Ok(a.with_coeffs(c))
}

type TableKey = (u64, u64);

/// Laguerre tables keyed by `(eta, tau)`, shared between threads.
#[derive(Debug, Default)]
pub struct TableCache {
    tables: RwLock<HashMap<TableKey, Arc<Vec<f64>>>>,
}

impl TableCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// `l_0(eta tau) .. l_{len-1}(eta tau)` in `f64`.
    pub fn get(&self, eta: f64, tau: f64, len: usize, policy: &EvalPolicy) -> Result<Arc<Vec<f64>>> {
        let key = (eta.to_bits(), tau.to_bits());
        if let Some(t) = self.tables.read().expect("table cache poisoned").get(&key) {
            if t.len() >= len {
                return Ok(Arc::clone(t));
            }
        }
        let table = Arc::new(laguerre_table::<f64>(len.max(1) - 1, eta * tau, policy)?.into_values());
        let mut map = self.tables.write().expect("table cache poisoned");
        let entry = map.entry(key).or_insert_with(|| Arc::clone(&table));
        if entry.len() < table.len() {
            *entry = Arc::clone(&table);
        }
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.tables.read().expect("table cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Operators sharing an evaluation policy and a table cache.
#[derive(Debug, Default)]
pub struct SeriesOperators {
    policy: EvalPolicy,
    cache: TableCache,
}

impl SeriesOperators {
    pub fn new(policy: EvalPolicy) -> Self {
        SeriesOperators { policy, cache: TableCache::new() }
    }

    pub fn policy(&self) -> &EvalPolicy {
        &self.policy
    }

    /// Table `l_j(eta tau)` for `j < len`, rounded to `T`.
    pub fn table<T: Real>(&self, eta: f64, tau: f64, len: usize) -> Result<Vec<T>> {
        check_tau(tau)?;
        let t = self.cache.get(eta, tau, len, &self.policy)?;
        Ok(t[..len].iter().map(|&v| T::cast(v)).collect())
    }

    /// Coefficients of `f(t - tau) H(t - tau)`.
    pub fn shift<T: Real>(&self, a: &LaguerreSpectrum<T>, params: &OperatorParams) -> Result<LaguerreSpectrum<T>> {
        let out_len = params.output_len.unwrap_or(a.len());
        let table = self.table::<T>(a.eta(), params.tau, out_len)?;
        let b = shift_slice(a.coeffs(), &table, out_len);
        LaguerreSpectrum::new(b, a.eta(), a.duration() + params.tau)
    }

    /// Coefficients of `f(tau - t)` restricted to `[0, tau]`.
    pub fn conjugate<T: Real>(
        &self,
        a: &LaguerreSpectrum<T>,
        params: &OperatorParams,
    ) -> Result<LaguerreSpectrum<T>> {
        let out_len = params.output_len.unwrap_or(a.len());
        let table = self.table::<T>(a.eta(), params.tau, a.len() + out_len)?;
        let b = conjugate_slice(a.coeffs(), &table, out_len);
        LaguerreSpectrum::new(b, a.eta(), params.tau)
    }

    /// Coefficients of `f(t) H(tau - t)`.
    pub fn truncate_after<T: Real>(&self, a: &LaguerreSpectrum<T>, tau: f64) -> Result<LaguerreSpectrum<T>> {
        let p = OperatorParams::new(tau);
        let once = self.conjugate(a, &p)?;
        let twice = self.conjugate(&once, &p)?;
        Ok(twice.with_duration(a.duration().min(tau)))
    }

    /// `a - shift(a; period)`.
    ///
    /// For the coefficients of a `period`-periodic function this equals
    /// truncation after `period`, with no loss from the finite length.
    pub fn remove_periodicity<T: Real>(&self, a: &LaguerreSpectrum<T>, period: f64) -> Result<LaguerreSpectrum<T>> {
        let shifted = self.shift(a, &OperatorParams::new(period))?;
        let c = a.coeffs().iter().zip(shifted.coeffs()).map(|(&x, &y)| x - y).collect();
        Ok(a.with_coeffs(c).with_duration(period))
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(invalid(format!("offset must be non-negative, got {tau}")));
    }
    Ok(())
}
