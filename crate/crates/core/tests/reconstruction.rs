mod common;

use std::sync::Arc;

use common::{max_abs_diff, norm};
use lagt_core::fixtures::source_signal;
use lagt_core::reconstruction::*;
use lagt_core::series_operators::SeriesOperators;
use lagt_core::transport_transform::*;
use lagt_core::{EvalPolicy, LagError, LaguerreSpectrum, SampledSignal};
use proptest::prelude::*;

fn ops() -> SeriesOperators {
    SeriesOperators::new(EvalPolicy::with_doubling())
}

fn policy() -> EvalPolicy {
    EvalPolicy::with_doubling()
}

#[test]
fn first_basis_function_is_a_decaying_exponential() {
    let eta: f64 = 400.0;
    let mut c = vec![0.0f64; 50];
    c[0] = 1.0 / eta.sqrt();
    let a = LaguerreSpectrum::new(c, eta, 1.0).unwrap();
    let grid: Vec<f64> = (0..2000).map(|i| i as f64 * 5e-4).collect();
    let v = reconstruct(&a, &grid, &policy()).unwrap();
    let exact: Vec<f64> = grid.iter().map(|t| (-eta * t / 2.0).exp()).collect();
    assert!(max_abs_diff(&v, &exact) <= 1e-12);
}

#[test]
fn zero_spectrum() {
    let a = LaguerreSpectrum::new(vec![0.0f64; 300], 800.0, 1.0).unwrap();
    let v = reconstruct_uniform(&a, 0.002, 500, &policy()).unwrap();
    assert!(v.values().iter().all(|&x| x == 0.0));
    let m = build_transform_matrix::<f64>(800.0, 299, 250, 1.0, false, &ops()).unwrap();
    let f = spectrum_to_fourier(&a, &m, 500).unwrap();
    assert!(f.coeffs().iter().all(|c| c.norm() == 0.0));
}

#[test]
fn single_precision_plateau() {
    let s = source_signal(0.002, 1.0).unwrap();
    let tapered = s.tapered(0.05).unwrap();
    for eta in [800.0, 1600.0] {
        let m = build_transform_matrix::<f32>(eta, 800, 250, 1.0, true, &ops()).unwrap();
        let a = algorithm2(&s, &m, &TransformOptions::default()).unwrap();
        let err = common::eps(&a, &tapered);
        assert!(err <= 5e-7, "eta {eta}: {err:e}");
    }
}

#[test]
fn forward_then_inverse_is_the_identity() {
    let s = source_signal(0.002, 1.0).unwrap();
    let tapered = s.tapered(0.05).unwrap();
    let m64 = build_transform_matrix::<f64>(1600.0, 900, 250, 1.0, true, &ops()).unwrap();
    let a = algorithm2(&s, &m64, &TransformOptions::default()).unwrap();
    assert!(common::eps(&a, &tapered) <= 1e-10);
    let m32 = build_transform_matrix::<f32>(1600.0, 900, 250, 1.0, true, &ops()).unwrap();
    let a = algorithm2(&s, &m32, &TransformOptions::default()).unwrap();
    assert!(common::eps(&a, &tapered) <= 1e-6);
}

#[test]
fn fourier_route_matches_direct_synthesis() {
    let s = source_signal(0.002, 1.0).unwrap();
    let ops = ops();
    let (eta, n) = (1600.0, 900);
    let modified = build_transform_matrix::<f64>(eta, n, 250, 1.0, true, &ops).unwrap();
    let a = algorithm2(&s, &modified, &TransformOptions::default()).unwrap();
    let plain = build_transform_matrix::<f64>(eta, n, 250, 1.0, false, &ops).unwrap();
    let via_fourier = inverse_dft(&spectrum_to_fourier(&a, &plain, s.len()).unwrap()).unwrap();
    let direct = reconstruct(&a, &s.times(), &policy()).unwrap();
    let inner = 10..s.len() - 10;
    let err = relative_error(&direct[inner.clone()], &via_fourier.values()[inner]).unwrap();
    assert!(err <= 1e-6, "{err:e}");
    assert!((via_fourier.step() - s.step()).abs() < 1e-15);
}

#[test]
fn fourier_route_rings_at_a_boundary_jump() {
    // f(0) = 0 but f(T) = 1: the periodic extension jumps
    let s = SampledSignal::from_fn(500, 0.002, |t| t).unwrap();
    let ops = ops();
    let (eta, n) = (800.0, 1500);
    let a = algorithm3::<f64>(&s, eta, n, &TransformOptions::untapered(), &ops).unwrap();
    let plain = build_transform_matrix::<f64>(eta, n, 250, 1.0, false, &ops).unwrap();
    let via_fourier = inverse_dft(&spectrum_to_fourier(&a, &plain, s.len()).unwrap()).unwrap();
    let err: Vec<f64> = s.values().iter().zip(via_fourier.values()).map(|(x, y)| (x - y).abs()).collect();
    let edge = err[..5].iter().chain(&err[495..]).fold(0.0f64, |m, &e| m.max(e));
    let middle = err[200..300].iter().fold(0.0f64, |m, &e| m.max(e));
    assert!(edge >= 0.1, "{edge:e}");
    assert!(edge >= 20.0 * middle, "{edge:e} {middle:e}");
}

#[test]
fn relative_error_examples() {
    assert_eq!(relative_error(&[3.0, 4.0], &[3.0, 4.0]).unwrap(), 0.0);
    assert_eq!(relative_error(&[3.0, 4.0], &[0.0, 0.0]).unwrap(), 1.0);
    assert!((relative_error(&[3.0, 4.0], &[3.0, 0.0]).unwrap() - 0.8).abs() <= 1e-15);
    assert!(matches!(relative_error(&[0.0, 0.0], &[1.0, 0.0]), Err(LagError::DivisionByZero)));
    assert!(matches!(relative_error(&[1.0], &[1.0, 0.0]), Err(LagError::DimensionMismatch(_))));
}

#[test]
fn input_checks() {
    let a = LaguerreSpectrum::new(vec![1.0f64; 20], 100.0, 1.0).unwrap();
    assert!(matches!(reconstruct(&a, &[0.1, -0.2], &policy()), Err(LagError::InvalidArgument(_))));
    let empty = LaguerreSpectrum::new(Vec::<f64>::new(), 100.0, 1.0).unwrap();
    assert!(matches!(reconstruct(&empty, &[0.1], &policy()), Err(LagError::EmptySpectrum)));
    let ops = ops();
    let modified = build_transform_matrix::<f64>(100.0, 19, 50, 1.0, true, &ops).unwrap();
    assert!(matches!(spectrum_to_fourier(&a, &modified, 100), Err(LagError::InvalidArgument(_))));
    let other = build_transform_matrix::<f64>(200.0, 19, 50, 1.0, false, &ops).unwrap();
    assert!(matches!(spectrum_to_fourier(&a, &other, 100), Err(LagError::DimensionMismatch(_))));
    let short = build_transform_matrix::<f64>(100.0, 9, 50, 1.0, false, &ops).unwrap();
    assert!(matches!(spectrum_to_fourier(&a, &short, 100), Err(LagError::DimensionMismatch(_))));
}

#[test]
fn cached_bases_are_shared() {
    let cache = BasisCache::new();
    let p = policy();
    let b1 = cache.uniform(800.0, 0.002, 500, 400, &p).unwrap();
    let b2 = cache.uniform(800.0, 0.002, 500, 300, &p).unwrap();
    assert!(Arc::ptr_eq(&b1, &b2));
    let s = source_signal(0.002, 1.0).unwrap();
    let a = algorithm3::<f64>(&s, 800.0, 400, &TransformOptions::default(), &ops()).unwrap();
    let direct = reconstruct(&a, &s.times(), &p).unwrap();
    assert_eq!(b1.evaluate(&a).unwrap(), direct);
    let longer = cache.uniform(800.0, 0.002, 500, 600, &p).unwrap();
    assert!(!Arc::ptr_eq(&b1, &longer));
    let too_long = LaguerreSpectrum::new(vec![0.0f64; 700], 800.0, 1.0).unwrap();
    assert!(matches!(longer.evaluate(&too_long), Err(LagError::DimensionMismatch(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn synthesis_is_linear(
        a in prop::collection::vec(-1.0f64..1.0, 1..200),
        seed in prop::collection::vec(-1.0f64..1.0, 200),
        alpha in -3.0f64..3.0,
        beta in -3.0f64..3.0,
    ) {
        let eta = 300.0;
        let b = &seed[..a.len()];
        let mix: Vec<f64> = a.iter().zip(b).map(|(x, y)| alpha * x + beta * y).collect();
        let grid: Vec<f64> = (0..100).map(|i| i as f64 * 0.01).collect();
        let basis = ReconstructionBasis::new(eta, &grid, a.len() - 1, &policy()).unwrap();
        let eval = |c: &[f64]| basis.evaluate(&LaguerreSpectrum::new(c.to_vec(), eta, 1.0).unwrap()).unwrap();
        let (va, vb, vm) = (eval(&a), eval(b), eval(&mix));
        // every basis value is bounded by sqrt(eta)
        let l1 = |c: &[f64], s: f64| s.abs() * c.iter().map(|x| x.abs()).sum::<f64>();
        let bound = 4.0 * f64::EPSILON * eta.sqrt() * (l1(&a, alpha) + l1(b, beta) + l1(&mix, 1.0));
        for i in 0..grid.len() {
            prop_assert!((vm[i] - (alpha * va[i] + beta * vb[i])).abs() <= bound);
        }
        prop_assert!(norm(&vm).is_finite());
    }
}
