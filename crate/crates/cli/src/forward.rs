use std::fs;
use std::path::{Path, PathBuf};

use lagt_core::reconstruction::{reconstruct, relative_error};
use lagt_core::segmented_transform::{algorithm4, SegmentOptions};
use lagt_core::series_operators::SeriesOperators;
use lagt_core::spectrum_truncation::energy_truncate;
use lagt_core::transport_transform::{
    algorithm1_untruncated, algorithm2, algorithm3, algorithm3_ramped, build_transform_matrix, TransformOptions,
};
use lagt_core::{EvalPolicy, LaguerreSpectrum, Precision, Real, SampledSignal};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{ForwardArgs, TransformFlags, Truncation};
use crate::failure::{Failure, Kind};
use crate::formats;
use crate::provenance::Provenance;

#[derive(Debug, Serialize)]
struct SegmentSummary {
    segments: usize,
    local_count: usize,
    total_local_coefficients: usize,
    bounds: Vec<(f64, f64)>,
}

#[derive(Debug, Serialize)]
struct Report {
    coefficients: usize,
    samples: usize,
    truncation: Truncation,
    #[serde(skip_serializing_if = "Option::is_none")]
    m0: Option<usize>,
    /// Relative L2 error of the series against the tapered input on its samples.
    epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    segments: Option<SegmentSummary>,
}

#[derive(Debug, Serialize)]
struct SpectrumOut<'a> {
    provenance: Provenance<'a, ForwardArgs>,
    eta: f64,
    duration: f64,
    step: f64,
    precision: Precision,
    coeffs: Vec<f64>,
    report: Report,
}

pub fn policy(flags: &TransformFlags) -> EvalPolicy {
    if flags.shift_doubling {
        EvalPolicy::with_doubling()
    } else {
        EvalPolicy::default()
    }
}

pub fn options(flags: &TransformFlags) -> TransformOptions {
    TransformOptions { taper_fraction: flags.taper, n_freq: flags.nfreq, policy: policy(flags) }
}

fn check(args: &ForwardArgs) -> Result<(), Failure> {
    if args.transform.ramp_width.is_some() && matches!(args.algorithm, 2 | 4) {
        return Err(Failure::usage("--ramp-width applies to algorithms 1 and 3 only"));
    }
    if args.segments != 1 && args.algorithm != 4 {
        return Err(Failure::usage("--segments applies to algorithm 4 only"));
    }
    Ok(())
}

fn inputs(args: &ForwardArgs) -> Result<Vec<(PathBuf, PathBuf)>, Failure> {
    let input = &args.input;
    if input.is_dir() {
        let mut files: Vec<PathBuf> = fs::read_dir(input)
            .map_err(|e| Failure::io(format!("reading {}: {e}", input.display())))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| formats::is_signal_file(p))
            .collect();
        files.sort();
        if files.is_empty() {
            return Err(Failure::io(format!("{}: no .csv, .f32 or .bin files", input.display())));
        }
        let out_dir = args.output.clone().unwrap_or_else(|| input.clone());
        fs::create_dir_all(&out_dir).map_err(|e| Failure::io(format!("creating {}: {e}", out_dir.display())))?;
        Ok(files.into_iter().map(|f| (f.clone(), out_dir.join(spectrum_name(&f)))).collect())
    } else {
        let out = args.output.clone().unwrap_or_else(|| input.with_file_name(spectrum_name(input)));
        Ok(vec![(input.clone(), out)])
    }
}

fn spectrum_name(input: &Path) -> String {
    let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    format!("{stem}.spectrum.json")
}

pub fn run(args: &ForwardArgs) -> Result<(), Failure> {
    check(args)?;
    let jobs = inputs(args)?;
    // collect keeps input order whatever order the workers finish in
    let results: Vec<Result<String, Failure>> =
        jobs.par_iter().map(|(input, output)| process(args, input, output)).collect();
    if jobs.len() == 1 {
        return results.into_iter().next().expect("one job").map(|line| println!("{line}"));
    }
    let mut first: Option<Failure> = None;
    let mut failed = 0;
    for ((input, _), r) in jobs.iter().zip(results) {
        match r {
            Ok(line) => println!("{line}"),
            Err(e) => {
                eprintln!("{}: {e}", input.display());
                failed += 1;
                first.get_or_insert(e);
            }
        }
    }
    match first {
        None => Ok(()),
        Some(e) => Err(Failure { kind: e.kind, message: format!("{failed} of {} inputs failed", jobs.len()) }),
    }
}

fn process(args: &ForwardArgs, input: &Path, output: &Path) -> Result<String, Failure> {
    let signal = formats::read_signal(input).map_err(|e| Failure::io(format!("{e:#}")))?;
    let (spectrum, report) = match args.transform.precision {
        Precision::Single => transform::<f32>(args, &signal)?,
        Precision::Double => transform::<f64>(args, &signal)?,
    };
    let line = format!(
        "{} -> {}: {} coefficients, epsilon {}",
        input.display(),
        output.display(),
        report.coefficients,
        report.epsilon.map_or("n/a".into(), |e| format!("{e:e}"))
    );
    let out = SpectrumOut {
        provenance: Provenance::new("forward", Some(input), args),
        eta: spectrum.eta(),
        duration: spectrum.duration(),
        step: signal.step(),
        precision: args.transform.precision,
        coeffs: spectrum.coeffs().to_vec(),
        report,
    };
    let text = serde_json::to_string_pretty(&out).map_err(Failure::io)? + "\n";
    formats::write_text(output, &text).map_err(|e| Failure { kind: Kind::Io, message: format!("{e:#}") })?;
    Ok(line)
}

fn transform<T: Real>(args: &ForwardArgs, signal: &SampledSignal) -> Result<(LaguerreSpectrum<f64>, Report), Failure> {
    let flags = &args.transform;
    let opts = options(flags);
    let ops = SeriesOperators::new(opts.policy);
    let (eta, n) = (args.eta, args.ncoeff);
    let tapered = signal.tapered(flags.taper)?;
    let mut segments = None;
    let a: LaguerreSpectrum<T> = match args.algorithm {
        1 => algorithm1_untruncated(signal, eta, n, flags.extension, flags.ramp_width, &opts)?,
        2 => {
            let n_freq = flags.nfreq.unwrap_or(signal.len() / 2);
            let m = build_transform_matrix::<T>(eta, n, n_freq, signal.duration(), true, &ops)?;
            algorithm2(signal, &m, &opts)?
        }
        3 => match flags.ramp_width {
            Some(w) => algorithm3_ramped(signal, eta, n, w, &opts, &ops)?,
            None => algorithm3(signal, eta, n, &opts, &ops)?,
        },
        _ => {
            let p = args.segments;
            let nominal = signal.duration() / p.max(1) as f64;
            let seg = SegmentOptions {
                segments: p,
                buffer_fraction: flags.buffer_width.map_or(0.1, |w| w / nominal),
                local_count: flags.local_count,
                method: flags.local_method.into(),
                transform: opts,
            };
            let (a, r) = algorithm4(signal, eta, n, &seg, &ops)?;
            segments = Some(SegmentSummary {
                segments: p,
                local_count: r.local_count,
                total_local_coefficients: r.total_local_coefficients,
                bounds: r.plan.bounds(),
            });
            a
        }
    };
    let truncation = args.truncation.unwrap_or(if args.algorithm == 1 { Truncation::Energy } else { Truncation::None });
    let (a, m0) = match truncation {
        Truncation::Energy => {
            let (kept, r) = energy_truncate(&a, &tapered)?;
            (kept, Some(r.m0))
        }
        Truncation::Conjugation => (ops.truncate_after(&a, signal.duration())?, None),
        Truncation::None => (a, None),
    };
    let values = reconstruct(&a, &signal.times(), ops.policy())?;
    let epsilon = if tapered.energy() > 0.0 { Some(relative_error(tapered.values(), &values)?) } else { None };
    let report = Report { coefficients: a.len(), samples: signal.len(), truncation, m0, epsilon, segments };
    Ok((a.to_f64(), report))
}
