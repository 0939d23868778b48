//! Synthesis of time samples from Laguerre coefficients, and the error measure.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_complex::{Complex, Complex64};
use rayon::prelude::*;

use crate::error::{invalid, mismatch, LagError, Result};
use crate::laguerre_eval::{laguerre_table, EvalPolicy};
use crate::real::Real;
use crate::signal::SampledSignal;
use crate::spectrum::{FourierSpectrum, LaguerreSpectrum};
use crate::transport_transform::TransformMatrix;

/// Basis values `sqrt(eta) l_m(eta t_i)` on a fixed grid.
#[derive(Debug, Clone)]
pub struct ReconstructionBasis {
    eta: f64,
    grid: Vec<f64>,
    order_max: usize,
    rows: Vec<Vec<f64>>,
}

impl ReconstructionBasis {
    pub fn new(eta: f64, grid: &[f64], order_max: usize, policy: &EvalPolicy) -> Result<Self> {
        if !(eta.is_finite() && eta > 0.0) {
            return Err(invalid(format!("eta must be positive, got {eta}")));
        }
        let rows = grid
            .par_iter()
            .map(|&t| basis_row(eta, t, order_max, policy))
            .collect::<Result<Vec<_>>>()?;
        Ok(ReconstructionBasis { eta, grid: grid.to_vec(), order_max, rows })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn order_max(&self) -> usize {
        self.order_max
    }

    /// `sum_m a_m sqrt(eta) l_m(eta t_i)` at every grid point.
    pub fn evaluate<T: Real>(&self, a: &LaguerreSpectrum<T>) -> Result<Vec<f64>> {
        self.check(a)?;
        let c: Vec<f64> = a.coeffs().iter().map(|x| x.widen()).collect();
        Ok(self
            .rows
            .par_iter()
            .map(|row| row.iter().zip(&c).map(|(b, x)| b * x).sum())
            .collect())
    }

    fn check<T: Real>(&self, a: &LaguerreSpectrum<T>) -> Result<()> {
        if a.is_empty() {
            return Err(LagError::EmptySpectrum);
        }
        if a.eta() != self.eta {
            return Err(mismatch(format!("basis built for eta {}, spectrum has {}", self.eta, a.eta())));
        }
        if a.len() > self.order_max + 1 {
            return Err(mismatch(format!(
                "basis holds {} orders, spectrum has {}",
                self.order_max + 1,
                a.len()
            )));
        }
        Ok(())
    }
    /// Relative error of every prefix `a_0 ..= a_m` against `reference`.
    pub fn prefix_errors<T: Real>(&self, a: &LaguerreSpectrum<T>, reference: &[f64]) -> Result<Vec<f64>> {
        self.check(a)?;
        if reference.len() != self.grid.len() {
            return Err(mismatch(format!("{} grid points, {} reference samples", self.grid.len(), reference.len())));
        }
        let norm: f64 = reference.iter().map(|x| x * x).sum();
        if norm == 0.0 {
            return Err(LagError::DivisionByZero);
        }
        let mut residual = reference.to_vec();
        Ok(a.coeffs()
            .iter()
            .enumerate()
            .map(|(m, c)| {
                let c = c.widen();
                let mut sq = 0.0;
                for (r, row) in residual.iter_mut().zip(&self.rows) {
                    *r -= c * row[m];
                    sq += *r * *r;
                }
                (sq / norm).sqrt()
            })
            .collect())
    }
}

fn basis_row(eta: f64, t: f64, order_max: usize, policy: &EvalPolicy) -> Result<Vec<f64>> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(invalid(format!("grid point {t} is not a non-negative time")));
    }
    let scale = eta.sqrt();
    let mut v = laguerre_table::<f64>(order_max, eta * t, policy)?.into_values();
    v.iter_mut().for_each(|x| *x *= scale);
    Ok(v)
}

/// Bases keyed by `eta`, step and length of a uniform grid.
#[derive(Debug, Default)]
pub struct BasisCache {
    bases: RwLock<HashMap<(u64, u64, usize), Arc<ReconstructionBasis>>>,
}

impl BasisCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn uniform(
        &self,
        eta: f64,
        step: f64,
        len: usize,
        order_max: usize,
        policy: &EvalPolicy,
    ) -> Result<Arc<ReconstructionBasis>> {
        let key = (eta.to_bits(), step.to_bits(), len);
        if let Some(b) = self.bases.read().expect("basis cache poisoned").get(&key) {
            if b.order_max >= order_max {
                return Ok(Arc::clone(b));
            }
        }
        let grid: Vec<f64> = (0..len).map(|i| i as f64 * step).collect();
        let basis = Arc::new(ReconstructionBasis::new(eta, &grid, order_max, policy)?);
        self.bases
            .write()
            .expect("basis cache poisoned")
            .insert(key, Arc::clone(&basis));
        Ok(basis)
    }
}

/// Values of the series at arbitrary times.
pub fn reconstruct<T: Real>(a: &LaguerreSpectrum<T>, grid: &[f64], policy: &EvalPolicy) -> Result<Vec<f64>> {
    if a.is_empty() {
        return Err(LagError::EmptySpectrum);
    }
    // one row at a time, so long grids never hold the whole basis
    let c: Vec<f64> = a.coeffs().iter().map(|x| x.widen()).collect();
    grid.par_iter()
        .map(|&t| Ok(basis_row(a.eta(), t, a.len() - 1, policy)?.iter().zip(&c).map(|(b, x)| b * x).sum()))
        .collect()
}

/// Values of the series on `i * step`, `i < len`.
pub fn reconstruct_uniform<T: Real>(
    a: &LaguerreSpectrum<T>,
    step: f64,
    len: usize,
    policy: &EvalPolicy,
) -> Result<SampledSignal> {
    let grid: Vec<f64> = (0..len).map(|i| i as f64 * step).collect();
    SampledSignal::new(reconstruct(a, &grid, policy)?, step)
}

/// Fourier coefficients `f~_j = sum_m conj(M_mj) a_m` through a plain matrix.
pub fn spectrum_to_fourier<T: Real>(
    a: &LaguerreSpectrum<T>,
    matrix: &TransformMatrix<T>,
    samples: usize,
) -> Result<FourierSpectrum<f64>> {
    if matrix.is_modified() {
        return Err(invalid("the inverse route needs a plain transform matrix"));
    }
    if a.len() > matrix.rows() {
        return Err(mismatch(format!("{} coefficients but the matrix has {} rows", a.len(), matrix.rows())));
    }
    if a.eta() != matrix.eta() {
        return Err(mismatch(format!("matrix built for eta {}, spectrum has {}", matrix.eta(), a.eta())));
    }
    let coeffs: Vec<Complex64> = (0..matrix.cols())
        .into_par_iter()
        .map(|j| {
            a.coeffs().iter().enumerate().fold(Complex64::new(0.0, 0.0), |acc, (m, &x)| {
                let e = matrix.entry(m, j);
                acc + Complex64::new(e.re.widen(), -e.im.widen()) * x.widen()
            })
        })
        .collect();
    FourierSpectrum::new(coeffs, matrix.duration(), samples)
}

/// Real Fourier series `(1/T) (f~_0 + sum_j w_j Re(f~_j exp(i k_j t)))` on
/// the spectrum's sample grid.
pub fn inverse_dft<T: Real>(spectrum: &FourierSpectrum<T>) -> Result<SampledSignal> {
    let n = spectrum.samples();
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (j, f) in spectrum.coeffs().iter().enumerate() {
        let v = Complex::new(f.re.widen(), f.im.widen());
        if j == 0 {
            buf[0] = Complex64::new(v.re, 0.0);
        } else if 2 * j == n {
            buf[j] = Complex64::new(v.re, 0.0);
        } else {
            buf[j] = v;
            buf[n - j] = v.conj();
        }
    }
    let ifft = f64::with_planner(|p| p.plan_fft_inverse(n));
    ifft.process(&mut buf);
    let scale = 1.0 / spectrum.duration();
    SampledSignal::new(buf.iter().map(|c| c.re * scale).collect(), spectrum.duration() / n as f64)
}

/// `||reference - approx|| / ||reference||` over common samples.
pub fn relative_error(reference: &[f64], approx: &[f64]) -> Result<f64> {
    if reference.len() != approx.len() {
        return Err(mismatch(format!("{} reference samples, {} approximate", reference.len(), approx.len())));
    }
    let norm: f64 = reference.iter().map(|x| x * x).sum();
    if norm == 0.0 {
        return Err(LagError::DivisionByZero);
    }
    let diff: f64 = reference.iter().zip(approx).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok((diff / norm).sqrt())
}
