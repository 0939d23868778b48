//! Independent reference computations for the integration tests.
#![allow(dead_code)]

use astro_float::{BigFloat, Consts, RoundingMode};
use gauss_quad::legendre::GaussLegendre;
use lagt_core::reconstruction::{reconstruct, relative_error};
use lagt_core::series_operators::SeriesOperators;
use lagt_core::transport_transform::{algorithm3, TransformOptions};
use lagt_core::{EvalPolicy, LaguerreSpectrum, SampledSignal};

/// `l_0(x) .. l_n(x)` by the plain three-term recurrence in `bits`-bit
/// floating point, rounded to `f64`.
pub fn bigfloat_laguerre(n: usize, x: f64, bits: usize) -> Vec<f64> {
    let rm = RoundingMode::ToEven;
    let mut cc = Consts::new().expect("constants cache");
    let bx = BigFloat::from_f64(x, bits);
    let damp = bx.div(&BigFloat::from_f64(-2.0, bits), bits, rm).exp(bits, rm, &mut cc);
    let one = BigFloat::from_f64(1.0, bits);
    let mut prev = one.clone();
    let mut cur = one.sub(&bx, bits, rm);
    let mut out = vec![prev.clone()];
    if n >= 1 {
        out.push(cur.clone());
    }
    for k in 1..n {
        let kf = BigFloat::from_f64(k as f64, bits);
        let c = BigFloat::from_f64((2 * k + 1) as f64, bits).sub(&bx, bits, rm);
        let next = c
            .mul(&cur, bits, rm)
            .sub(&kf.mul(&prev, bits, rm), bits, rm)
            .div(&BigFloat::from_f64((k + 1) as f64, bits), bits, rm);
        prev = cur;
        cur = next;
        out.push(cur.clone());
    }
    out.iter()
        .map(|v| {
            let s = format!("{}", v.mul(&damp, bits, rm));
            s.parse::<f64>().expect("decimal output")
        })
        .collect()
}

/// Gram matrix of `sqrt(eta) l_m(eta t)`, `m < count`, over `x = eta t`
/// in `[0, x_max]`.
///
/// With `x = u^2` the oscillations of `l_m` near the origin have a uniform
/// wavelength in `u`, so composite Gauss-Legendre on equal `u` panels
/// resolves all orders alike.
pub fn gram_matrix(count: usize, x_max: f64, panels: usize, degree: usize) -> Vec<Vec<f64>> {
    let rule = GaussLegendre::new(degree.try_into().expect("positive degree"));
    let width = x_max.sqrt() / panels as f64;
    let mut gram = vec![vec![0.0; count]; count];
    for p in 0..panels {
        let a = p as f64 * width;
        for &(node, weight) in rule.as_node_weight_pairs() {
            let u = a + 0.5 * width * (node + 1.0);
            let w = 0.5 * width * weight * 2.0 * u;
            let l = lagt_core::laguerre_eval::eval_split_recurrence::<f64>(count - 1, u * u)
                .expect("inside guard")
                .into_values();
            for i in 0..count {
                let li = w * l[i];
                for j in i..count {
                    gram[i][j] += li * l[j];
                }
            }
        }
    }
    for i in 0..count {
        for j in 0..i {
            gram[i][j] = gram[j][i];
        }
    }
    gram
}

/// Exact coefficients of `sqrt(eta) e^{-eta t/2} (eta t)^k / k!`:
/// `(-1)^j C(k, j)` for `j <= k`, zero beyond.
pub fn polynomial_weight_coefficients(k: usize, len: usize) -> Vec<f64> {
    let mut c = vec![0.0; len];
    let mut binom = 1.0;
    for j in 0..=k.min(len - 1) {
        c[j] = if j % 2 == 0 { binom } else { -binom };
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    c
}

/// Coefficients of a signal that is already zero near both ends.
pub fn direct_transform(signal: &SampledSignal, eta: f64, n: usize) -> LaguerreSpectrum<f64> {
    let ops = SeriesOperators::new(EvalPolicy::with_doubling());
    algorithm3::<f64>(signal, eta, n, &TransformOptions::untapered(), &ops).expect("transform")
}

/// Series values on `grid`.
pub fn values(a: &LaguerreSpectrum<f64>, grid: &[f64]) -> Vec<f64> {
    reconstruct(a, grid, &EvalPolicy::with_doubling()).expect("reconstruction")
}

/// Relative error of the series against a signal on the signal's grid.
pub fn eps<T: lagt_core::Real>(a: &LaguerreSpectrum<T>, signal: &SampledSignal) -> f64 {
    let v = reconstruct(a, &signal.times(), &EvalPolicy::with_doubling()).expect("reconstruction");
    relative_error(signal.values(), &v).expect("nonzero reference")
}

/// `exp(-((t - c) / w)^2)`.
pub fn gaussian(t: f64, c: f64, w: f64) -> f64 {
    (-((t - c) / w).powi(2)).exp()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
