//! Scaled Laguerre functions `l_m(x) = exp(-x/2) L_m(x)`.
//!
//! Two evaluators are provided. The split recurrence runs the three-term
//! recurrence on `exp(-x/4) L_m(x)` and multiplies by `exp(-x/4)` at the end,
//! which keeps every intermediate inside the `f64` range up to `x` of a few
//! thousand. Past the guard, a base table at `x / 2^p` is doubled `p` times
//! with the shift operator.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, LagError, Result};
use crate::real::Real;
use crate::series_operators::shift_slice;

/// Largest argument accepted by the split recurrence by default.
pub const DEFAULT_GUARD: f64 = 2600.0;

/// How arguments above the guard are handled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalPolicy {
    pub guard: f64,
    pub allow_doubling: bool,
}

impl Default for EvalPolicy {
    fn default() -> Self {
        EvalPolicy { guard: DEFAULT_GUARD, allow_doubling: false }
    }
}

impl EvalPolicy {
    /// Default guard with shift doubling switched on.
    pub fn with_doubling() -> Self {
        EvalPolicy { allow_doubling: true, ..Self::default() }
    }
}

/// Values `l_0(x) .. l_{order_max}(x)` at one argument.
#[derive(Debug, Clone, PartialEq)]
pub struct LaguerreFunctionTable<T> {
    argument: f64,
    values: Vec<T>,
}

impl<T: Real> LaguerreFunctionTable<T> {
    pub fn argument(&self) -> f64 {
        self.argument
    }

    pub fn order_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn get(&self, m: usize) -> T {
        self.values[m]
    }
}

/// Schedule for evaluating at `eta * base_step * 2^doublings`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftSchedule {
    pub eta: f64,
    pub base_step: f64,
    pub doublings: u32,
}

impl ShiftSchedule {
    pub fn new(eta: f64, base_step: f64, doublings: u32) -> Result<Self> {
        if !(eta.is_finite() && eta > 0.0) {
            return Err(invalid(format!("eta must be positive, got {eta}")));
        }
        if !(base_step.is_finite() && base_step >= 0.0) {
            return Err(invalid(format!("base step must be non-negative, got {base_step}")));
        }
        if doublings > 0 && base_step == 0.0 {
            return Err(invalid("doubling a zero base step"));
        }
        Ok(ShiftSchedule { eta, base_step, doublings })
    }

    /// Fewest doublings that bring `eta * t / 2^p` under `guard`.
    pub fn for_time(eta: f64, t: f64, guard: f64) -> Result<Self> {
        if !(guard.is_finite() && guard > 0.0) {
            return Err(invalid(format!("guard must be positive, got {guard}")));
        }
        let mut p = 0u32;
        while eta * t / 2f64.powi(p as i32) > guard {
            p += 1;
        }
        Self::new(eta, t / 2f64.powi(p as i32), p)
    }

    pub fn base_argument(&self) -> f64 {
        self.eta * self.base_step
    }

    pub fn total_argument(&self) -> f64 {
        self.base_argument() * 2f64.powi(self.doublings as i32)
    }
}

/// Split recurrence with the default guard.
pub fn eval_split_recurrence<T: Real>(order_max: usize, x: f64) -> Result<LaguerreFunctionTable<T>> {
    eval_split_recurrence_with_guard(order_max, x, DEFAULT_GUARD)
}

/// Split recurrence. Accumulates in `f64` and rounds the result to `T`.
pub fn eval_split_recurrence_with_guard<T: Real>(
    order_max: usize,
    x: f64,
    guard: f64,
) -> Result<LaguerreFunctionTable<T>> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(invalid(format!("argument must be non-negative, got {x}")));
    }
    if x > guard {
        return Err(LagError::GuardExceeded { argument: x, guard });
    }
    let s = (-0.25 * x).exp();
    let mut values = Vec::with_capacity(order_max + 1);
    let mut prev = s;
    values.push(T::cast(prev * s));
    if order_max >= 1 {
        let mut cur = (1.0 - x) * s;
        values.push(T::cast(cur * s));
        for k in 1..order_max {
            let kf = k as f64;
            let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
            prev = cur;
            cur = next;
            values.push(T::cast(cur * s));
        }
    }
    Ok(LaguerreFunctionTable { argument: x, values })
}

/// Evaluate at `schedule.total_argument()` by repeated doubling.
///
/// The base table comes from the split recurrence; with zero doublings the
/// result is that table unchanged.
pub fn eval_shift_doubling<T: Real>(
    order_max: usize,
    schedule: &ShiftSchedule,
    guard: f64,
) -> Result<LaguerreFunctionTable<T>> {
    let base = eval_split_recurrence_with_guard::<f64>(order_max, schedule.base_argument(), guard)?;
    let mut values: Vec<T> = base.values.iter().map(|&v| T::cast(v)).collect();
    for _ in 0..schedule.doublings {
        values = shift_slice(&values, &values, order_max + 1);
    }
    Ok(LaguerreFunctionTable { argument: schedule.total_argument(), values })
}

/// Table at `x`, doubling past the guard if the policy allows it.
pub fn laguerre_table<T: Real>(
    order_max: usize,
    x: f64,
    policy: &EvalPolicy,
) -> Result<LaguerreFunctionTable<T>> {
    if x <= policy.guard || !x.is_finite() {
        return eval_split_recurrence_with_guard(order_max, x, policy.guard);
    }
    if !policy.allow_doubling {
        return Err(LagError::GuardExceeded { argument: x, guard: policy.guard });
    }
    let schedule = ShiftSchedule::for_time(1.0, x, policy.guard)?;
    let mut table = eval_shift_doubling(order_max, &schedule, policy.guard)?;
    table.argument = x;
    Ok(table)
}

/// Large-order Bessel form `J_0(2 sqrt(nu x))` with `nu = n + 1/2`.
///
/// Only a qualitative check: valid for `n` large and `x` well inside the
/// oscillatory region.
pub fn asymptotic_value(n: usize, x: f64) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(invalid(format!("argument must be non-negative, got {x}")));
    }
    let nu = n as f64 + 0.5;
    Ok(bessel_j0(2.0 * (nu * x).sqrt()))
}

/// `J_0` from its power series for small arguments and the Hankel expansion
/// beyond.
fn bessel_j0(z: f64) -> f64 {
    if z < 12.0 {
        let q = -0.25 * z * z;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..80 {
            term *= q / (k as f64 * k as f64);
            sum += term;
            if term.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        return sum;
    }
    let mut p = 1.0;
    let mut q = -1.0 / (8.0 * z);
    // two more terms of each asymptotic series
    let z2 = z * z;
    p += -9.0 / (128.0 * z2) + 3675.0 / (32768.0 * z2 * z2);
    q += 75.0 / (1024.0 * z2 * z) - 59535.0 / (262144.0 * z2 * z2 * z);
    let chi = z - std::f64::consts::FRAC_PI_4;
    (2.0 / (std::f64::consts::PI * z)).sqrt() * (p * chi.cos() - q * chi.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_argument_gives_ones() {
        let t = eval_split_recurrence::<f64>(50, 0.0).unwrap();
        assert!(t.values().iter().all(|&v| v == 1.0));
        let t = eval_split_recurrence::<f32>(50, 0.0).unwrap();
        assert!(t.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn low_orders_closed_form() {
        for &x in &[0.3, 2.0, 17.5, 140.0] {
            let t = eval_split_recurrence::<f64>(2, x).unwrap();
            let e = (-x / 2.0).exp();
            assert!((t.get(0) - e).abs() <= 4.0 * f64::EPSILON * e);
            assert!((t.get(1) - (1.0 - x) * e).abs() <= 1e-14 * e * (1.0 + x));
            let l2 = 1.0 - 2.0 * x + 0.5 * x * x;
            assert!((t.get(2) - l2 * e).abs() <= 1e-13 * e * (1.0 + x * x));
        }
    }

    #[test]
    fn guard_is_enforced() {
        let err = eval_split_recurrence::<f64>(10, 3000.0).unwrap_err();
        assert!(matches!(err, LagError::GuardExceeded { .. }));
        assert!(laguerre_table::<f64>(10, 3000.0, &EvalPolicy::default()).is_err());
        assert!(laguerre_table::<f64>(10, 3000.0, &EvalPolicy::with_doubling()).is_ok());
        assert!(eval_split_recurrence::<f64>(10, -1.0).is_err());
    }

    #[test]
    fn no_doubling_is_identity() {
        let s = ShiftSchedule::new(2.0, 40.0, 0).unwrap();
        let a = eval_shift_doubling::<f64>(300, &s, DEFAULT_GUARD).unwrap();
        let b = eval_split_recurrence::<f64>(300, 80.0).unwrap();
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn doubling_matches_direct_recurrence() {
        let s = ShiftSchedule::new(1.0, 250.0, 2).unwrap();
        let a = eval_shift_doubling::<f64>(1500, &s, DEFAULT_GUARD).unwrap();
        let b = eval_split_recurrence::<f64>(1500, 1000.0).unwrap();
        let err = a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(err < 1e-12, "max deviation {err}");
    }

    #[test]
    fn schedule_picks_fewest_doublings() {
        let s = ShiftSchedule::for_time(1600.0, 20.0, 2600.0).unwrap();
        assert_eq!(s.doublings, 4);
        assert!((s.total_argument() - 32000.0).abs() < 1e-9);
        assert!(s.base_argument() <= 2600.0);
    }

    #[test]
    fn bessel_form_tracks_high_orders() {
        let n = 2000;
        for &x in &[0.5, 3.0, 20.0] {
            let t = eval_split_recurrence::<f64>(n, x).unwrap();
            let approx = asymptotic_value(n, x).unwrap();
            assert!((t.get(n) - approx).abs() < 2e-2, "x={x}: {} vs {approx}", t.get(n));
        }
    }
}
