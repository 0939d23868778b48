//! Linear convolution and correlation of real sequences through the FFT.

use num_complex::Complex;

use crate::real::Real;

/// Below this many multiply-adds the direct sums are used.
const DIRECT_LIMIT: usize = 4096;

/// `out[m] = sum_{j<=m} x[m-j] * y[j]` for `m < out_len`.
///
/// Entries past the end of either input count as zero.
pub fn convolve<T: Real>(x: &[T], y: &[T], out_len: usize) -> Vec<T> {
    let x = &x[..x.len().min(out_len)];
    let y = &y[..y.len().min(out_len)];
    if x.is_empty() || y.is_empty() {
        return vec![T::zero(); out_len];
    }
    if x.len() * y.len() <= DIRECT_LIMIT {
        return convolve_direct(x, y, out_len);
    }
    let size = (x.len() + y.len() - 1).min(2 * out_len - 1).next_power_of_two();
    let full = cyclic_product(x, y, size);
    let mut out: Vec<T> = full.into_iter().take(out_len).collect();
    out.resize(out_len, T::zero());
    out
}

/// `out[j] = sum_m d[m] * table[m + j]` for `j < out_len`.
///
/// Entries of `table` past its end count as zero.
pub fn correlate<T: Real>(d: &[T], table: &[T], out_len: usize) -> Vec<T> {
    if d.is_empty() || table.is_empty() {
        return vec![T::zero(); out_len];
    }
    let needed = (d.len() + out_len - 1).min(table.len());
    let table = &table[..needed];
    if d.len() * out_len <= DIRECT_LIMIT {
        return correlate_direct(d, table, out_len);
    }
    let rev: Vec<T> = d.iter().rev().copied().collect();
    let size = (d.len() + table.len() - 1).next_power_of_two();
    let full = cyclic_product(&rev, table, size);
    let first = d.len() - 1;
    (0..out_len)
        .map(|j| full.get(first + j).copied().unwrap_or_else(T::zero))
        .collect()
}

/// Direct O(n^2) form of [`convolve`].
pub fn convolve_direct<T: Real>(x: &[T], y: &[T], out_len: usize) -> Vec<T> {
    let mut out = vec![T::zero(); out_len];
    for (m, o) in out.iter_mut().enumerate() {
        let lo = m.saturating_sub(x.len().saturating_sub(1));
        let hi = m.min(y.len().saturating_sub(1));
        let mut acc = T::zero();
        if !y.is_empty() {
            for j in lo..=hi {
                acc = acc + x[m - j] * y[j];
            }
        }
        *o = acc;
    }
    out
}

/// Direct O(n^2) form of [`correlate`].
pub fn correlate_direct<T: Real>(d: &[T], table: &[T], out_len: usize) -> Vec<T> {
    (0..out_len)
        .map(|j| {
            d.iter()
                .enumerate()
                .take_while(|(m, _)| m + j < table.len())
                .fold(T::zero(), |acc, (m, &v)| acc + v * table[m + j])
        })
        .collect()
}

fn cyclic_product<T: Real>(x: &[T], y: &[T], size: usize) -> Vec<T> {
    let load = |v: &[T]| {
        let mut buf = vec![Complex::new(T::zero(), T::zero()); size];
        for (b, &s) in buf.iter_mut().zip(v) {
            b.re = s;
        }
        buf
    };
    let mut a = load(x);
    let mut b = load(y);
    let (fwd, inv) = T::with_planner(|p| (p.plan_fft_forward(size), p.plan_fft_inverse(size)));
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (u, v) in a.iter_mut().zip(&b) {
        *u = *u * *v;
    }
    inv.process(&mut a);
    let scale = T::cast(1.0 / size as f64);
    a.into_iter().map(|c| c.re * scale).collect()
}
