//! Uniformly sampled real signals.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Samples `f(i * step)` for `i = 0 .. len`; the signal covers `[0, len * step)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledSignal {
    values: Vec<f64>,
    step: f64,
}

impl SampledSignal {
    pub fn new(values: Vec<f64>, step: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(invalid(format!("step must be positive, got {step}")));
        }
        if values.len() < 2 {
            return Err(invalid("a signal needs at least two samples"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("sample {i} is not finite")));
        }
        Ok(SampledSignal { values, step })
    }

    /// Sample `f` on `len` points.
    pub fn from_fn(len: usize, step: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new((0..len).map(|i| f(i as f64 * step)).collect(), step)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.values.len() as f64 * self.step
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.step
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.time(i)).collect()
    }

    /// Squared L2 norm by the rectangle rule.
    pub fn energy(&self) -> f64 {
        self.step * self.values.iter().map(|v| v * v).sum::<f64>()
    }

    /// Raised-cosine taper over the last `fraction` of the duration.
    pub fn tapered(&self, fraction: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&fraction) {
            return Err(invalid(format!("taper fraction must lie in [0, 1], got {fraction}")));
        }
        let width = fraction * self.duration();
        if width <= 0.0 {
            return Ok(self.clone());
        }
        let start = self.duration() - width;
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let t = self.time(i);
                if t <= start {
                    v
                } else {
                    let c = (std::f64::consts::FRAC_PI_2 * (t - start) / width).cos();
                    v * c * c
                }
            })
            .collect();
        Ok(SampledSignal { values, step: self.step })
    }

    /// Append zeros until the duration is `factor` times the original.
    pub fn zero_padded(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor >= 1.0) {
            return Err(invalid(format!("extension factor must be at least 1, got {factor}")));
        }
        let len = (self.len() as f64 * factor).round() as usize;
        let mut values = self.values.clone();
        values.resize(len.max(self.len()), 0.0);
        Ok(SampledSignal { values, step: self.step })
    }

    /// Prepend a `sin^2` ramp rising from zero to `f(0)` over `width`
    /// (rounded to whole samples). Returns the signal and the ramp length.
    pub fn ramped(&self, width: f64) -> Result<(Self, f64)> {
        if !(width.is_finite() && width >= 0.0) {
            return Err(invalid(format!("ramp width must be non-negative, got {width}")));
        }
        let k = (width / self.step).round() as usize;
        let f0 = self.values[0];
        let mut values = Vec::with_capacity(k + self.len());
        for i in 0..k {
            let s = (std::f64::consts::FRAC_PI_2 * i as f64 / k as f64).sin();
            values.push(f0 * s * s);
        }
        values.extend_from_slice(&self.values);
        Ok((SampledSignal { values, step: self.step }, k as f64 * self.step))
    }

    /// Samples `range` as a new signal with the same step.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Result<Self> {
        Self::new(self.values[range].to_vec(), self.step)
    }
}

/// Weight of the taper in [`SampledSignal::tapered`] at time `t`.
pub fn taper_weight(t: f64, duration: f64, fraction: f64) -> f64 {
    let width = fraction * duration;
    let start = duration - width;
    if width <= 0.0 || t <= start {
        return 1.0;
    }
    let c = (std::f64::consts::FRAC_PI_2 * (t - start) / width).cos();
    c * c
}
