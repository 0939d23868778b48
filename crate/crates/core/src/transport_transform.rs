//! Laguerre coefficients of a sampled signal from its Fourier series.
//!
//! Each Fourier mode `exp(i k t)` has the closed-form Laguerre coefficients
//! `base(k) * ratio(k)^m` with
//! `base = sqrt(eta) / (eta/2 - i k)` and `ratio = (-eta/2 - i k) / (eta/2 - i k)`.
//! Summing over the modes of the periodic extension gives the coefficients
//! of that extension; they are then cut back to `[0, T]` either by energy
//! truncation or exactly with [`SeriesOperators::remove_periodicity`].

use num_complex::{Complex, Complex64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, mismatch, LagError, Result};
use crate::laguerre_eval::EvalPolicy;
use crate::real::Real;
use crate::series_operators::{shift_slice, OperatorParams, SeriesOperators};
use crate::signal::SampledSignal;
use crate::spectrum::{wavenumber, FourierSpectrum, LaguerreSpectrum};
use crate::spectrum_truncation::{energy_truncate, TruncationReport};

/// Rows of the `m` recursion advanced from one stored power.
const BLOCK: usize = 32;

/// Default limit on the number of transform-matrix entries.
pub const DEFAULT_MATRIX_LIMIT: usize = 1 << 31;

/// Knobs shared by the transform algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformOptions {
    /// Fraction of the duration tapered to zero at the right end.
    pub taper_fraction: f64,
    /// Highest Fourier index used; defaults to the Nyquist index.
    pub n_freq: Option<usize>,
    pub policy: EvalPolicy,
}

impl Default for TransformOptions {
    fn default() -> Self {
        TransformOptions { taper_fraction: 0.05, n_freq: None, policy: EvalPolicy::default() }
    }
}

impl TransformOptions {
    pub fn untapered() -> Self {
        TransformOptions { taper_fraction: 0.0, ..Self::default() }
    }
}

/// One-sided DFT scaled by the step, computed in `T`.
pub fn forward_dft<T: Real>(signal: &SampledSignal, n_freq: usize) -> Result<FourierSpectrum<T>> {
    let len = signal.len();
    if n_freq > len / 2 {
        return Err(invalid(format!("n_freq {n_freq} exceeds the Nyquist index {}", len / 2)));
    }
    let mut buf: Vec<Complex<T>> =
        signal.values().iter().map(|&v| Complex::new(T::cast(v), T::zero())).collect();
    let fft = T::with_planner(|p| p.plan_fft_forward(len));
    fft.process(&mut buf);
    let h = T::cast(signal.step());
    buf.truncate(n_freq + 1);
    for c in &mut buf {
        *c = *c * h;
    }
    FourierSpectrum::new(buf, signal.duration(), len)
}

/// `(base, ratio)` for wavenumber `k`.
pub fn spectral_multiplier(eta: f64, k: f64) -> Result<(Complex64, Complex64)> {
    if !(eta.is_finite() && eta > 0.0) {
        return Err(invalid(format!("eta must be positive, got {eta}")));
    }
    if !k.is_finite() {
        return Err(invalid("wavenumber is not finite"));
    }
    let (theta, mag) = polar_parts(eta, k);
    let base = Complex64::from_polar(mag, theta);
    let (s2, c2) = (2.0 * theta).sin_cos();
    Ok((base, Complex64::new(-c2, -s2)))
}

/// Phase `theta = atan2(k, eta/2)` of `base` and its magnitude.
fn polar_parts(eta: f64, k: f64) -> (f64, f64) {
    let s = 0.5 * eta;
    (k.atan2(s), eta.sqrt() / s.hypot(k))
}

/// Coefficients `a_0 ..= a_n` of the periodic extension, advanced in `t`
/// by `offset`.
///
/// Powers of the ratio are generated in `f64` by recursion, in blocks of
/// [`BLOCK`] rows, and only the final products are formed in `T`.
pub fn coefficients_via_transport<T: Real>(
    spectrum: &FourierSpectrum<T>,
    eta: f64,
    n: usize,
    offset: f64,
) -> Result<LaguerreSpectrum<T>> {
    if !(offset.is_finite() && offset >= 0.0) {
        return Err(invalid(format!("offset must be non-negative, got {offset}")));
    }
    let duration = spectrum.duration();
    if offset >= duration {
        return Err(invalid(format!("offset {offset} must be below the duration {duration}")));
    }
    let cols = spectrum.coeffs().len();
    let mut ratio = Vec::with_capacity(cols);
    let mut start = Vec::with_capacity(cols);
    for j in 0..cols {
        let k = wavenumber(j, duration);
        let (base, r) = spectral_multiplier(eta, k)?;
        let scale = spectrum.weight(j) / duration;
        let (s, c) = (k * offset).sin_cos();
        start.push(base * Complex64::new(c, s) * scale);
        ratio.push(r);
    }
    // ratio^r for r < BLOCK, row-major, and ratio^BLOCK
    let mut pow_re = vec![T::zero(); BLOCK * cols];
    let mut pow_im = vec![T::zero(); BLOCK * cols];
    let mut step = Vec::with_capacity(cols);
    for (j, &r) in ratio.iter().enumerate() {
        let mut p = Complex64::new(1.0, 0.0);
        for row in 0..BLOCK {
            pow_re[row * cols + j] = T::cast(p.re);
            pow_im[row * cols + j] = T::cast(p.im);
            p *= r;
        }
        step.push(p);
    }
    let blocks = n / BLOCK + 1;
    // products with the Fourier data for each block start
    let mut head_re = vec![T::zero(); blocks * cols];
    let mut head_im = vec![T::zero(); blocks * cols];
    for (j, f) in spectrum.coeffs().iter().enumerate() {
        let mut p = start[j];
        for q in 0..blocks {
            let v = Complex::new(T::cast(p.re), T::cast(p.im)) * *f;
            head_re[q * cols + j] = v.re;
            head_im[q * cols + j] = v.im;
            p *= step[j];
        }
    }
    let mut coeffs = vec![T::zero(); n + 1];
    coeffs.par_chunks_mut(BLOCK).enumerate().for_each(|(q, out)| {
        let hr = &head_re[q * cols..(q + 1) * cols];
        let hi = &head_im[q * cols..(q + 1) * cols];
        for (row, o) in out.iter_mut().enumerate() {
            let pr = &pow_re[row * cols..(row + 1) * cols];
            let pi = &pow_im[row * cols..(row + 1) * cols];
            *o = dot_re(hr, hi, pr, pi);
        }
    });
    LaguerreSpectrum::new(coeffs, eta, duration)
}

/// `sum_j (ar_j br_j - ai_j bi_j)` with compensated summation.
fn dot_re<T: Real>(ar: &[T], ai: &[T], br: &[T], bi: &[T]) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for i in 0..ar.len() {
        for v in [ar[i] * br[i], -(ai[i] * bi[i])] {
            let t = sum + v;
            comp = comp + if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
            sum = t;
        }
    }
    sum + comp
}

/// Dense map from Fourier to Laguerre coefficients.
///
/// Entry `(m, j)` is `base(k_j) ratio(k_j)^m`; a modified matrix has the
/// periodic copies removed column by column.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformMatrix<T> {
    re: Vec<T>,
    im: Vec<T>,
    rows: usize,
    cols: usize,
    eta: f64,
    duration: f64,
    modified: bool,
}

impl<T: Real> TransformMatrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn is_modified(&self) -> bool {
        self.modified
    }

    pub fn entry(&self, m: usize, j: usize) -> Complex<T> {
        let i = m * self.cols + j;
        Complex::new(self.re[i], self.im[i])
    }

    /// `a_m = (1/T) sum_j w_j Re(M_mj f~_j)`.
    pub fn apply(&self, spectrum: &FourierSpectrum<T>) -> Result<LaguerreSpectrum<T>> {
        if spectrum.coeffs().len() != self.cols {
            return Err(mismatch(format!(
                "matrix has {} columns, spectrum has {} coefficients",
                self.cols,
                spectrum.coeffs().len()
            )));
        }
        if !same_duration(spectrum.duration(), self.duration) {
            return Err(mismatch(format!(
                "matrix built for duration {}, signal lasts {}",
                self.duration,
                spectrum.duration()
            )));
        }
        let (gr, gi): (Vec<T>, Vec<T>) = spectrum
            .coeffs()
            .iter()
            .enumerate()
            .map(|(j, f)| {
                let w = T::cast(spectrum.weight(j) / self.duration);
                (f.re * w, f.im * w)
            })
            .unzip();
        let cols = self.cols;
        let coeffs: Vec<T> = (0..self.rows)
            .into_par_iter()
            .map(|m| {
                let r = m * cols..(m + 1) * cols;
                dot_re(&self.re[r.clone()], &self.im[r], &gr, &gi)
            })
            .collect();
        LaguerreSpectrum::new(coeffs, self.eta, self.duration)
    }

    /// Column `j` as `(re, im)` vectors.
    pub fn column(&self, j: usize) -> (Vec<T>, Vec<T>) {
        (0..self.rows)
            .map(|m| (self.re[m * self.cols + j], self.im[m * self.cols + j]))
            .unzip()
    }
}

fn same_duration(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

/// Build the `(n+1) x (n_freq+1)` matrix for signals of length `duration`.
///
/// Entries are formed in `f64` from polar form, so every column has constant
/// magnitude, then rounded to `T`.
pub fn build_transform_matrix<T: Real>(
    eta: f64,
    n: usize,
    n_freq: usize,
    duration: f64,
    modified: bool,
    ops: &SeriesOperators,
) -> Result<TransformMatrix<T>> {
    build_transform_matrix_with_limit(eta, n, n_freq, duration, modified, ops, DEFAULT_MATRIX_LIMIT)
}

/// [`build_transform_matrix`] with an explicit limit on the entry count.
pub fn build_transform_matrix_with_limit<T: Real>(
    eta: f64,
    n: usize,
    n_freq: usize,
    duration: f64,
    modified: bool,
    ops: &SeriesOperators,
    max_entries: usize,
) -> Result<TransformMatrix<T>> {
    if !(eta.is_finite() && eta > 0.0) {
        return Err(invalid(format!("eta must be positive, got {eta}")));
    }
    if !(duration.is_finite() && duration > 0.0) {
        return Err(invalid(format!("duration must be positive, got {duration}")));
    }
    let rows = n + 1;
    let cols = n_freq + 1;
    let entries = rows.saturating_mul(cols);
    if entries > max_entries {
        return Err(LagError::AllocationGuard { entries, limit: max_entries });
    }
    let table = if modified { Some(ops.table::<f64>(eta, duration, rows)?) } else { None };
    let columns: Vec<(Vec<f64>, Vec<f64>)> = (0..cols)
        .into_par_iter()
        .map(|j| {
            let (theta, mag) = polar_parts(eta, wavenumber(j, duration));
            let turn = std::f64::consts::PI + 2.0 * theta;
            let (mut re, mut im): (Vec<f64>, Vec<f64>) = (0..rows)
                .map(|m| {
                    let (s, c) = (theta + m as f64 * turn).sin_cos();
                    (mag * c, mag * s)
                })
                .unzip();
            if let Some(t) = &table {
                let sr = shift_slice(&re, t, rows);
                let si = shift_slice(&im, t, rows);
                re.iter_mut().zip(&sr).for_each(|(a, b)| *a -= b);
                im.iter_mut().zip(&si).for_each(|(a, b)| *a -= b);
            }
            (re, im)
        })
        .collect();
    let mut re = vec![T::zero(); entries];
    let mut im = vec![T::zero(); entries];
    for (j, (cr, ci)) in columns.iter().enumerate() {
        for m in 0..rows {
            re[m * cols + j] = T::cast(cr[m]);
            im[m * cols + j] = T::cast(ci[m]);
        }
    }
    Ok(TransformMatrix { re, im, rows, cols, eta, duration, modified })
}

fn default_n_freq(signal: &SampledSignal, options: &TransformOptions) -> Result<usize> {
    let nyq = signal.len() / 2;
    match options.n_freq {
        Some(k) if k > nyq => Err(invalid(format!("n_freq {k} exceeds the Nyquist index {nyq}"))),
        Some(k) => Ok(k),
        None => Ok(nyq),
    }
}

/// Zero-pad by `extension`, transform, cut by energy.
pub fn algorithm1<T: Real>(
    signal: &SampledSignal,
    eta: f64,
    n: usize,
    extension: f64,
    options: &TransformOptions,
) -> Result<(LaguerreSpectrum<T>, TruncationReport)> {
    let a = algorithm1_untruncated(signal, eta, n, extension, None, options)?;
    energy_truncate(&a, &signal.tapered(options.taper_fraction)?)
}

/// The transport step of [`algorithm1`] or [`algorithm1_ramped`], keeping
/// all `n + 1` coefficients.
pub fn algorithm1_untruncated<T: Real>(
    signal: &SampledSignal,
    eta: f64,
    n: usize,
    extension: f64,
    ramp_width: Option<f64>,
    options: &TransformOptions,
) -> Result<LaguerreSpectrum<T>> {
    let tapered = signal.tapered(options.taper_fraction)?;
    let (extended, delta) = match ramp_width {
        None => (tapered.zero_padded(extension)?, 0.0),
        Some(width) => {
            let (ramped, delta) = tapered.ramped(width)?;
            (ramped.zero_padded(extension * signal.duration() / ramped.duration())?, delta)
        }
    };
    let n_freq = default_n_freq(&extended, options)?;
    let dft = forward_dft::<T>(&extended, n_freq)?;
    Ok(coefficients_via_transport(&dft, eta, n, delta)?.with_duration(signal.duration()))
}

/// Apply a modified matrix to the tapered signal's DFT.
pub fn algorithm2<T: Real>(
    signal: &SampledSignal,
    matrix: &TransformMatrix<T>,
    options: &TransformOptions,
) -> Result<LaguerreSpectrum<T>> {
    if !matrix.is_modified() {
        return Err(invalid("algorithm 2 needs a modified transform matrix"));
    }
    if !same_duration(signal.duration(), matrix.duration()) {
        return Err(mismatch(format!(
            "matrix built for duration {}, signal lasts {}",
            matrix.duration(),
            signal.duration()
        )));
    }
    let n_freq = matrix.cols() - 1;
    if n_freq > signal.len() / 2 {
        return Err(mismatch(format!(
            "matrix uses {} frequencies but the signal has Nyquist index {}",
            n_freq,
            signal.len() / 2
        )));
    }
    let tapered = signal.tapered(options.taper_fraction)?;
    let dft = forward_dft::<T>(&tapered, n_freq)?;
    matrix.apply(&dft)
}

/// Transport recursion followed by exact removal of the periodic copies.
///
/// The removal is carried out in `f64` whatever `T` is.
pub fn algorithm3<T: Real>(
    signal: &SampledSignal,
    eta: f64,
    n: usize,
    options: &TransformOptions,
    ops: &SeriesOperators,
) -> Result<LaguerreSpectrum<T>> {
    let tapered = signal.tapered(options.taper_fraction)?;
    let n_freq = default_n_freq(&tapered, options)?;
    let dft = forward_dft::<T>(&tapered, n_freq)?;
    let a = coefficients_via_transport(&dft, eta, n, 0.0)?;
    // the correction runs in f64, as it does when the modified matrix is built
    Ok(ops.remove_periodicity(&a.to_f64(), tapered.duration())?.cast())
}

/// Zero-pad, ramp the start, transform with the ramp skipped, cut by energy.
pub fn algorithm1_ramped<T: Real>(
    signal: &SampledSignal,
    eta: f64,
    n: usize,
    extension: f64,
    ramp_width: f64,
    options: &TransformOptions,
) -> Result<(LaguerreSpectrum<T>, TruncationReport)> {
    let a = algorithm1_untruncated(signal, eta, n, extension, Some(ramp_width), options)?;
    energy_truncate(&a, &signal.tapered(options.taper_fraction)?)
}

/// Length factor of the reversed intermediate in [`algorithm3_ramped`].
///
/// Reversal moves the sharp early features of a signal to late times, where
/// the basis resolves them with far fewer functions per unit time.
pub const REVERSAL_OVERSAMPLING: usize = 16;

/// Ramp the start, transform exactly, then drop the ramp by two
/// conjugations.
pub fn algorithm3_ramped<T: Real>(
    signal: &SampledSignal,
    eta: f64,
    n: usize,
    ramp_width: f64,
    options: &TransformOptions,
    ops: &SeriesOperators,
) -> Result<LaguerreSpectrum<T>> {
    let tapered = signal.tapered(options.taper_fraction)?;
    let (ramped, _) = tapered.ramped(ramp_width)?;
    let n_freq = default_n_freq(&ramped, options)?;
    let dft = forward_dft::<T>(&ramped, n_freq)?;
    let a = coefficients_via_transport(&dft, eta, n, 0.0)?;
    let c = ops.remove_periodicity(&a.to_f64(), ramped.duration())?;
    let reversed = ops.conjugate(&c, &OperatorParams::with_len(ramped.duration(), REVERSAL_OVERSAMPLING * (n + 1)))?;
    Ok(ops.conjugate(&reversed, &OperatorParams::with_len(tapered.duration(), n + 1))?.cast())
}
