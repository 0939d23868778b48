//! Laguerre transforms of sampled signals.
//!
//! Coefficients `a_m` of `f(t) = sum_m a_m sqrt(eta) exp(-eta t / 2) L_m(eta t)`
//! are computed from the FFT of the samples through a closed-form
//! per-wavenumber recursion. Periodic copies introduced by the FFT are
//! removed exactly with coefficient-space shift and conjugation operators,
//! and long signals are handled by overlapping segments.

pub mod error;
pub mod fft;
pub mod fixtures;
pub mod laguerre_eval;
pub mod quadrature_oracle;
pub mod real;
pub mod reconstruction;
pub mod segmented_transform;
pub mod series_operators;
pub mod signal;
pub mod spectrum;
pub mod spectrum_truncation;
pub mod transport_transform;

pub use error::{LagError, Result};
pub use laguerre_eval::EvalPolicy;
pub use real::{Precision, Real};
pub use signal::SampledSignal;
pub use spectrum::{FourierSpectrum, LaguerreSpectrum};
