//! Fourier and Laguerre coefficient containers.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::real::Real;

/// One-sided DFT `f~_j = h * sum_i f_i exp(-2 pi i i j / N)` for `j = 0 ..= n_freq`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct FourierSpectrum<T> {
    coeffs: Vec<Complex<T>>,
    duration: f64,
    samples: usize,
}

impl<T: Real> FourierSpectrum<T> {
    pub fn new(coeffs: Vec<Complex<T>>, duration: f64, samples: usize) -> Result<Self> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(invalid(format!("duration must be positive, got {duration}")));
        }
        if coeffs.is_empty() || coeffs.len() > samples / 2 + 1 {
            return Err(invalid(format!(
                "{} Fourier coefficients do not fit {samples} samples",
                coeffs.len()
            )));
        }
        Ok(FourierSpectrum { coeffs, duration, samples })
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// Length of the sampled signal the spectrum came from.
    pub fn samples(&self) -> usize {
        self.samples
    }

    /// Highest retained frequency index.
    pub fn n_freq(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn wavenumber(&self, j: usize) -> f64 {
        wavenumber(j, self.duration)
    }

    /// Weight of index `j` in the real inverse series.
    pub fn weight(&self, j: usize) -> f64 {
        series_weight(j, self.samples)
    }
}

/// `k_j = 2 pi j / T`.
pub fn wavenumber(j: usize, duration: f64) -> f64 {
    j as f64 * (2.0 * std::f64::consts::PI / duration)
}

/// 1 for the mean and for the exact Nyquist index of an even length, else 2.
pub fn series_weight(j: usize, samples: usize) -> f64 {
    if j == 0 || (samples.is_multiple_of(2) && 2 * j == samples) {
        1.0
    } else {
        2.0
    }
}

/// Coefficients `a_0 .. a_n` of `f(t) = sum a_m sqrt(eta) l_m(eta t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct LaguerreSpectrum<T> {
    coeffs: Vec<T>,
    eta: f64,
    duration: f64,
}

impl<T: Real> LaguerreSpectrum<T> {
    pub fn new(coeffs: Vec<T>, eta: f64, duration: f64) -> Result<Self> {
        if !(eta.is_finite() && eta > 0.0) {
            return Err(invalid(format!("eta must be positive, got {eta}")));
        }
        if !(duration.is_finite() && duration >= 0.0) {
            return Err(invalid(format!("duration must be non-negative, got {duration}")));
        }
        Ok(LaguerreSpectrum { coeffs, eta, duration })
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Same metadata, new coefficients.
    pub fn with_coeffs(&self, coeffs: Vec<T>) -> Self {
        LaguerreSpectrum { coeffs, eta: self.eta, duration: self.duration }
    }

    pub fn with_duration(mut self, duration: f64) -> Self {
        self.duration = duration;
        self
    }

    /// Keep `a_0 .. a_{len-1}`.
    pub fn truncated(&self, len: usize) -> Self {
        self.with_coeffs(self.coeffs[..len.min(self.coeffs.len())].to_vec())
    }

    pub fn to_f64(&self) -> LaguerreSpectrum<f64> {
        LaguerreSpectrum {
            coeffs: self.coeffs.iter().map(|c| c.widen()).collect(),
            eta: self.eta,
            duration: self.duration,
        }
    }

    pub fn cast<U: Real>(&self) -> LaguerreSpectrum<U> {
        LaguerreSpectrum {
            coeffs: self.coeffs.iter().map(|c| U::cast(c.widen())).collect(),
            eta: self.eta,
            duration: self.duration,
        }
    }
}
