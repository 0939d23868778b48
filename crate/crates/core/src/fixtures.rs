//! Test signals shared by the tests, the benches and the command line.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::signal::SampledSignal;

/// Seed of the default bursts fixture.
pub const BURSTS_SEED: u64 = 0x1a6_2019;

/// Parameters of the Gaussian-modulated sine pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceParams {
    pub f0: f64,
    pub g: f64,
    pub t0: f64,
}

impl Default for SourceParams {
    fn default() -> Self {
        SourceParams { f0: 30.0, g: 4.0, t0: 0.5 }
    }
}

/// `exp(-(2 pi f0 (t - t0) / g)^2) sin(2 pi f0 (t - t0))`.
pub fn source(t: f64, p: &SourceParams) -> f64 {
    let a = 2.0 * std::f64::consts::PI * p.f0 * (t - p.t0);
    (-(a / p.g).powi(2)).exp() * a.sin()
}

/// Default pulse sampled on `[0, duration)`.
pub fn source_signal(step: f64, duration: f64) -> Result<SampledSignal> {
    let p = SourceParams::default();
    SampledSignal::from_fn((duration / step).round() as usize, step, |t| source(t, &p))
}

/// Pulse centred near the origin, so `f(0)` is far from zero.
pub fn ramped_params() -> SourceParams {
    SourceParams { t0: 0.02, ..SourceParams::default() }
}

pub fn ramped_signal(step: f64, duration: f64) -> Result<SampledSignal> {
    let p = ramped_params();
    SampledSignal::from_fn((duration / step).round() as usize, step, |t| source(t, &p))
}

/// Ricker wavelet with peak frequency `freq`.
pub fn ricker(t: f64, freq: f64) -> f64 {
    let a = (std::f64::consts::PI * freq * t).powi(2);
    (1.0 - 2.0 * a) * (-a).exp()
}

/// Randomly placed wavelets, clipped at 40% of the peak amplitude.
///
/// Centres lie in `[0.1 T, 0.85 T]` so the signal vanishes near both ends.
pub fn bursts_signal(seed: u64, step: f64, duration: f64) -> Result<SampledSignal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = (10.0 * duration).ceil() as usize;
    let wavelets: Vec<(f64, f64, f64)> = (0..count)
        .map(|_| {
            (
                rng.random_range(0.1 * duration..0.85 * duration),
                rng.random_range(8.0..25.0),
                rng.random_range(-1.0..1.0),
            )
        })
        .collect();
    let len = (duration / step).round() as usize;
    let raw: Vec<f64> = (0..len)
        .map(|i| {
            let t = i as f64 * step;
            wavelets.iter().map(|&(c, f, a)| a * ricker(t - c, f)).sum()
        })
        .collect();
    let clip = 0.4 * raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    SampledSignal::new(raw.into_iter().map(|v| v.clamp(-clip, clip)).collect(), step)
}
