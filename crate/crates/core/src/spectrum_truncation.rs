//! Energy-based choice of the number of coefficients to keep.
//!
//! Coefficients produced from a periodic extension pick up periodic copies
//! past the signal support. Their partial energies `P_m` first climb to the
//! signal energy `E`, sit on a plateau, then overshoot. The cut-off is the
//! minimiser of `|E - P_m|`; on a rounding-level plateau the midpoint of the
//! plateau around the first minimiser is taken.

use serde::{Deserialize, Serialize};

use crate::error::{LagError, Result};
use crate::real::Real;
use crate::signal::SampledSignal;
use crate::spectrum::LaguerreSpectrum;

/// Misfits within this many `f64` ulps of `E` above the minimum are ties.
pub const TIE_ULPS: f64 = 64.0;

/// Outcome of an energy truncation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationReport {
    /// Last kept index.
    pub m0: usize,
    pub signal_energy: f64,
    /// `P_m = sum_{k<=m} a_k^2`.
    pub partial_energy: Vec<f64>,
}

impl TruncationReport {
    pub fn misfit(&self, m: usize) -> f64 {
        (self.signal_energy - self.partial_energy[m]).abs()
    }

    /// Resolution below which two misfits are considered equal.
    pub fn tie_tolerance(&self) -> f64 {
        TIE_ULPS * f64::EPSILON * self.signal_energy
    }
}

/// Running partial energies of a coefficient sequence.
pub fn partial_energies<T: Real>(a: &[T]) -> Vec<f64> {
    let mut acc = 0.0f64;
    a.iter()
        .map(|&c| {
            let c = c.widen();
            acc += c * c;
            acc
        })
        .collect()
}

/// Cut-off index for given partial energies and target energy.
pub fn select_cutoff(partial: &[f64], energy: f64) -> usize {
    if energy == 0.0 || partial.is_empty() {
        return 0;
    }
    let misfit: Vec<f64> = partial.iter().map(|p| (energy - p).abs()).collect();
    let (first, best) = misfit
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, v)| if v < bv { (i, v) } else { (bi, bv) });
    let limit = best + TIE_ULPS * f64::EPSILON * energy;
    let mut lo = first;
    while lo > 0 && misfit[lo - 1] <= limit {
        lo -= 1;
    }
    let mut hi = first;
    while hi + 1 < misfit.len() && misfit[hi + 1] <= limit {
        hi += 1;
    }
    if hi + 1 == misfit.len() {
        // plateau runs to the end: nothing to cut
        return hi;
    }
    (lo + hi) / 2
}

/// Keep `a_0 ..= a_{m0}` where `m0` matches the partial energy to the
/// signal energy.
pub fn energy_truncate<T: Real>(
    a: &LaguerreSpectrum<T>,
    signal: &SampledSignal,
) -> Result<(LaguerreSpectrum<T>, TruncationReport)> {
    if a.is_empty() {
        return Err(LagError::EmptySpectrum);
    }
    let partial = partial_energies(a.coeffs());
    let energy = signal.energy();
    let m0 = select_cutoff(&partial, energy);
    let report = TruncationReport { m0, signal_energy: energy, partial_energy: partial };
    Ok((a.truncated(m0 + 1), report))
}
