//! Transform of long signals by overlapping segments.
//!
//! The signal is split into `p = 2^s` pieces whose raised-cosine crossfades
//! form a partition of unity. Each piece is transformed on its own short
//! interval, and the local spectra are merged pairwise: the right child is
//! zero-padded to twice its length, shifted to its offset and added.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, mismatch, Result};
use crate::real::Real;
use crate::series_operators::{zero_pad, OperatorParams, SeriesOperators};
use crate::signal::SampledSignal;
use crate::spectrum::LaguerreSpectrum;
use crate::transport_transform::{algorithm2, algorithm3, build_transform_matrix, TransformMatrix, TransformOptions};

/// Segment layout in samples of the original grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentPlan {
    pub p: usize,
    pub step: f64,
    /// Half the crossfade length, in samples.
    pub half_buffer: usize,
    /// Nominal cut points `c_0 = 0 < ... < c_p = N`.
    pub cuts: Vec<usize>,
    /// `[start, end)` of every segment including its buffers.
    pub ranges: Vec<(usize, usize)>,
}

impl SegmentPlan {
    pub fn buffer_width(&self) -> f64 {
        2.0 * self.half_buffer as f64 * self.step
    }

    /// `(alpha_i, beta_i)` in time.
    pub fn bounds(&self) -> Vec<(f64, f64)> {
        self.ranges
            .iter()
            .map(|&(a, b)| (a as f64 * self.step, b as f64 * self.step))
            .collect()
    }

    /// Crossfade weights of segment `i` on its own samples.
    pub fn weights(&self, i: usize) -> Vec<f64> {
        let (start, end) = self.ranges[i];
        let hb = self.half_buffer;
        (start..end)
            .map(|k| {
                let mut w = 1.0;
                if i > 0 && k < self.cuts[i] + hb {
                    w = rise(k + hb - self.cuts[i], hb);
                }
                if i + 1 < self.p && k + hb >= self.cuts[i + 1] {
                    w = 1.0 - rise(k + hb - self.cuts[i + 1], hb);
                }
                w
            })
            .collect()
    }
}

/// `sin^2` crossfade at sample `pos` of a `2 hb` sample buffer.
fn rise(pos: usize, hb: usize) -> f64 {
    let s = (pos as f64 + 0.5) / (2 * hb) as f64;
    let v = (std::f64::consts::FRAC_PI_2 * s).sin();
    v * v
}

/// Split into `p` crossfaded local signals.
pub fn partition(signal: &SampledSignal, p: usize, buffer_width: f64) -> Result<(SegmentPlan, Vec<SampledSignal>)> {
    if p == 0 || !p.is_power_of_two() {
        return Err(invalid(format!("segment count {p} is not a power of two")));
    }
    if !(buffer_width.is_finite() && buffer_width >= 0.0) {
        return Err(invalid(format!("buffer width must be non-negative, got {buffer_width}")));
    }
    let n = signal.len();
    let cuts: Vec<usize> = (0..=p).map(|i| (i * n + p / 2) / p).collect();
    let shortest = cuts.windows(2).map(|w| w[1] - w[0]).min().unwrap_or(0);
    let half_buffer = if p == 1 { 0 } else { (buffer_width / (2.0 * signal.step())).round() as usize };
    if shortest < 2 || 2 * half_buffer >= shortest {
        return Err(invalid(format!(
            "buffer of {} samples does not fit segments of {shortest} samples",
            2 * half_buffer
        )));
    }
    let ranges: Vec<(usize, usize)> = (0..p)
        .map(|i| {
            let start = if i == 0 { 0 } else { cuts[i] - half_buffer };
            let end = if i + 1 == p { n } else { cuts[i + 1] + half_buffer };
            (start, end)
        })
        .collect();
    let plan = SegmentPlan { p, step: signal.step(), half_buffer, cuts, ranges };
    let locals = (0..p)
        .map(|i| {
            let (start, end) = plan.ranges[i];
            let values = signal.values()[start..end]
                .iter()
                .zip(plan.weights(i))
                .map(|(v, w)| v * w)
                .collect();
            SampledSignal::new(values, signal.step())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((plan, locals))
}

/// Place every local signal at its offset and add.
pub fn reassemble(plan: &SegmentPlan, locals: &[SampledSignal]) -> Vec<f64> {
    let n = *plan.cuts.last().unwrap_or(&0);
    let mut out = vec![0.0; n];
    for (local, &(start, _)) in locals.iter().zip(&plan.ranges) {
        for (o, v) in out[start..].iter_mut().zip(local.values()) {
            *o += v;
        }
    }
    out
}

/// Transform used for each segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LocalMethod {
    /// Modified matrices, one per distinct segment length.
    Matrix,
    /// Transport recursion plus periodic-copy removal.
    Recursion,
}

/// Options of the segmented transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentOptions {
    pub segments: usize,
    /// Crossfade length as a fraction of the nominal segment length.
    pub buffer_fraction: f64,
    /// Coefficients per segment; defaults to `ceil((n + 1) / p)`.
    pub local_count: Option<usize>,
    pub method: LocalMethod,
    /// Taper applied once to the whole signal.
    pub transform: TransformOptions,
}

impl Default for SegmentOptions {
    fn default() -> Self {
        SegmentOptions {
            segments: 1,
            buffer_fraction: 0.1,
            local_count: None,
            method: LocalMethod::Matrix,
            transform: TransformOptions::default(),
        }
    }
}

/// Wall-clock split of a segmented run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SegmentTimings {
    pub prep: Duration,
    pub step1: Duration,
    pub step2: Duration,
    pub total: Duration,
}

/// Bookkeeping of a segmented run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentReport {
    pub plan: SegmentPlan,
    pub local_count: usize,
    /// `p * local_count`, against the `n + 1` of a global transform.
    pub total_local_coefficients: usize,
    pub timings: SegmentTimings,
}

/// Modified matrices for every distinct local length.
pub fn prepare_matrices<T: Real>(
    locals: &[SampledSignal],
    eta: f64,
    local_count: usize,
    ops: &SeriesOperators,
) -> Result<HashMap<usize, TransformMatrix<T>>> {
    let mut lens: Vec<usize> = locals.iter().map(|s| s.len()).collect();
    lens.sort_unstable();
    lens.dedup();
    let step = locals.first().map(|s| s.step()).unwrap_or(1.0);
    lens.into_iter()
        .map(|len| {
            let m = build_transform_matrix::<T>(eta, local_count - 1, len / 2, len as f64 * step, true, ops)?;
            Ok((len, m))
        })
        .collect()
}

/// Transform every local signal on its own interval.
pub fn transform_segments<T: Real>(
    locals: &[SampledSignal],
    eta: f64,
    local_count: usize,
    matrices: Option<&HashMap<usize, TransformMatrix<T>>>,
    ops: &SeriesOperators,
) -> Result<Vec<LaguerreSpectrum<T>>> {
    if local_count == 0 {
        return Err(invalid("local coefficient count must be positive"));
    }
    let untapered = TransformOptions::untapered();
    locals
        .par_iter()
        .map(|s| match matrices.and_then(|m| m.get(&s.len())) {
            Some(m) => algorithm2(s, m, &untapered),
            None => algorithm3(s, eta, local_count - 1, &untapered, ops),
        })
        .collect()
}

/// Merge local spectra into one spectrum on `[0, T]`.
pub fn assemble<T: Real>(
    spectra: Vec<LaguerreSpectrum<T>>,
    plan: &SegmentPlan,
    ops: &SeriesOperators,
) -> Result<LaguerreSpectrum<T>> {
    if spectra.len() != plan.p {
        return Err(mismatch(format!("{} spectra for {} segments", spectra.len(), plan.p)));
    }
    let mut level: Vec<(LaguerreSpectrum<T>, usize)> =
        spectra.into_iter().zip(plan.ranges.iter().map(|r| r.0)).collect();
    while level.len() > 1 {
        let pairs: Vec<_> = level.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect();
        level = pairs
            .into_par_iter()
            .map(|((left, ls), (right, rs))| {
                if left.len() != right.len() {
                    return Err(mismatch(format!(
                        "merging spectra of {} and {} coefficients",
                        left.len(),
                        right.len()
                    )));
                }
                let len = 2 * left.len();
                let tau = (rs - ls) as f64 * plan.step;
                let moved = ops.shift(&zero_pad(&right, len)?, &OperatorParams::new(tau))?;
                let base = zero_pad(&left, len)?;
                let sum = base.coeffs().iter().zip(moved.coeffs()).map(|(&a, &b)| a + b).collect();
                let duration = moved.duration().max(base.duration());
                Ok((base.with_coeffs(sum).with_duration(duration), ls))
            })
            .collect::<Result<Vec<_>>>()?;
    }
    Ok(level.pop().expect("at least one segment").0)
}

/// Segmented transform of the whole signal, keeping `a_0 ..= a_n`.
pub fn algorithm4<T: Real>(
    signal: &SampledSignal,
    eta: f64,
    n: usize,
    options: &SegmentOptions,
    ops: &SeriesOperators,
) -> Result<(LaguerreSpectrum<T>, SegmentReport)> {
    let start = Instant::now();
    let p = options.segments;
    let tapered = signal.tapered(options.transform.taper_fraction)?;
    let nominal = tapered.duration() / p.max(1) as f64;
    let (plan, locals) = partition(&tapered, p, options.buffer_fraction * nominal)?;
    let local_count = options.local_count.unwrap_or((n + 1).div_ceil(p));
    let matrices = match options.method {
        LocalMethod::Matrix => Some(prepare_matrices::<T>(&locals, eta, local_count, ops)?),
        LocalMethod::Recursion => None,
    };
    let prep = start.elapsed();
    let t1 = Instant::now();
    let spectra = transform_segments(&locals, eta, local_count, matrices.as_ref(), ops)?;
    let step1 = t1.elapsed();
    let t2 = Instant::now();
    let merged = assemble(spectra, &plan, ops)?;
    let step2 = t2.elapsed();
    let total = start.elapsed();
    let out = merged.truncated(n + 1).with_duration(signal.duration());
    let report = SegmentReport {
        plan,
        local_count,
        total_local_coefficients: p * local_count,
        timings: SegmentTimings { prep, step1, step2, total },
    };
    Ok((out, report))
}
