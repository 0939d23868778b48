use std::path::PathBuf;

use lagt_core::fixtures::{bursts_signal, ramped_params, ramped_signal, source, source_signal, SourceParams};
use lagt_core::quadrature_oracle::rectangle_coefficients;
use lagt_core::reconstruction::{relative_error, ReconstructionBasis};
use lagt_core::segmented_transform::{algorithm4, SegmentOptions, SegmentTimings};
use lagt_core::series_operators::SeriesOperators;
use lagt_core::signal::taper_weight;
use lagt_core::transport_transform::{
    algorithm1_untruncated, algorithm2, algorithm3, algorithm3_ramped, build_transform_matrix,
};
use lagt_core::{LaguerreSpectrum, Precision, Real, SampledSignal};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{BenchArgs, Fixture};
use crate::failure::Failure;
use crate::formats;
use crate::forward::{options, policy};
use crate::provenance::Provenance;

/// Values the defaults resolved to, recorded next to the flags.
#[derive(Debug, Serialize)]
struct Resolved {
    etas: Vec<f64>,
    ncoeff: usize,
    step: f64,
    duration: f64,
    samples: usize,
    segments: Vec<usize>,
    oracle_step: Option<f64>,
}

struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    notes: Vec<String>,
}

/// `start:stop:step` (inclusive) or a comma list.
pub fn parse_etas(s: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::usage(format!("bad --etas `{s}`: expected start:stop:step or a comma list"));
    let etas: Vec<f64> = if s.contains(':') {
        let parts: Vec<f64> = s.split(':').map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
        let [start, stop, step] = parts[..] else { return Err(bad()) };
        if !(step > 0.0 && stop >= start) {
            return Err(bad());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| start + i as f64 * step).collect()
    } else {
        s.split(',').map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?
    };
    if etas.is_empty() || etas.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(bad());
    }
    Ok(etas)
}

fn parse_segments(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Failure::usage(format!("bad --segments `{s}`: expected a comma list of counts")))
}

fn fixture_signal(args: &BenchArgs, step: f64, duration: f64) -> Result<SampledSignal, Failure> {
    Ok(match args.fixture {
        Fixture::Source => source_signal(step, duration)?,
        Fixture::Ramped => ramped_signal(step, duration)?,
        Fixture::Bursts => bursts_signal(args.seed, step, duration)?,
    })
}

pub fn run(args: &BenchArgs) -> Result<(), Failure> {
    let bursts = args.fixture == Fixture::Bursts;
    let etas = parse_etas(args.etas.as_deref().unwrap_or(if bursts { "600" } else { "800" }))?;
    let n = args.ncoeff.unwrap_or(if bursts { 2047 } else { 1200 });
    let step = args.step.unwrap_or(if bursts { 0.004 } else { 0.002 });
    let duration = args.duration.unwrap_or(if bursts { 4.0 } else { 1.0 });
    let segments = parse_segments(&args.segments)?;
    if args.n_step == 0 || args.repeats == 0 {
        return Err(Failure::usage("--n-step and --repeats must be positive"));
    }
    if args.transform.ramp_width.is_some() && matches!(args.algorithm, 2 | 4) {
        return Err(Failure::usage("--ramp-width applies to algorithms 1 and 3 only"));
    }
    let signal = fixture_signal(args, step, duration)?;
    let oracle_step = args.oracle.then(|| args.oracle_step.unwrap_or(step / 10.0));
    let resolved = Resolved {
        etas: etas.clone(),
        ncoeff: n,
        step,
        duration,
        samples: signal.len(),
        segments: segments.clone(),
        oracle_step,
    };
    let table = match (args.algorithm, args.transform.precision) {
        (4, Precision::Single) => timing_table::<f32>(args, &signal, &resolved)?,
        (4, Precision::Double) => timing_table::<f64>(args, &signal, &resolved)?,
        (_, Precision::Single) => error_curves::<f32>(args, &signal, &resolved)?,
        (_, Precision::Double) => error_curves::<f64>(args, &signal, &resolved)?,
    };
    let prefix = args.output.clone().unwrap_or_else(|| {
        let name = format!("{:?}", args.fixture).to_lowercase();
        PathBuf::from(format!("bench_{name}_alg{}", args.algorithm))
    });
    let csv_path = prefix.with_extension("csv");
    let json_path = prefix.with_extension("json");
    let mut csv = table.columns.join(",") + "\n";
    for row in &table.rows {
        csv.push_str(&row.iter().map(|&v| formats::format_number(v)).collect::<Vec<_>>().join(","));
        csv.push('\n');
    }
    let report = json!({
        "provenance": Provenance::new("bench", None, args),
        "resolved": resolved,
        "columns": table.columns,
        "rows": table.rows.iter().map(|r| r.iter().map(|&v| json_value(v)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "notes": table.notes,
    });
    let text = serde_json::to_string_pretty(&report).map_err(Failure::io)? + "\n";
    let io = |e: anyhow::Error| Failure::io(format!("{e:#}"));
    formats::write_text(&csv_path, &csv).map_err(io)?;
    formats::write_text(&json_path, &text).map_err(io)?;
    for note in &table.notes {
        println!("{note}");
    }
    println!("wrote {} and {}", csv_path.display(), json_path.display());
    Ok(())
}

fn json_value(v: f64) -> Value {
    if v.is_finite() && v == v.trunc() && v.abs() < 1e15 {
        json!(v as i64)
    } else {
        json!(v)
    }
}

/// The fixture as a function of time, tapered like the sampled signal.
fn oracle_integrand<'a>(args: &BenchArgs, tapered: &'a SampledSignal) -> Box<dyn Fn(f64) -> f64 + Sync + 'a> {
    let (duration, fraction) = (tapered.duration(), args.transform.taper);
    let analytic = |p: SourceParams| -> Box<dyn Fn(f64) -> f64 + Sync> {
        Box::new(move |t| source(t, &p) * taper_weight(t, duration, fraction))
    };
    match args.fixture {
        Fixture::Source => analytic(SourceParams::default()),
        Fixture::Ramped => analytic(ramped_params()),
        // the bursts are only known at the samples: hold the nearest one
        Fixture::Bursts => {
            let h = tapered.step();
            Box::new(move |t| tapered.values().get((t / h).round() as usize).copied().unwrap_or(0.0))
        }
    }
}

fn spectrum<T: Real>(
    args: &BenchArgs,
    signal: &SampledSignal,
    eta: f64,
    n: usize,
    ops: &SeriesOperators,
) -> Result<LaguerreSpectrum<T>, Failure> {
    let flags = &args.transform;
    let opts = options(flags);
    Ok(match args.algorithm {
        1 => algorithm1_untruncated(signal, eta, n, flags.extension, flags.ramp_width, &opts)?,
        2 => {
            let n_freq = flags.nfreq.unwrap_or(signal.len() / 2);
            let m = build_transform_matrix::<T>(eta, n, n_freq, signal.duration(), true, ops)?;
            algorithm2(signal, &m, &opts)?
        }
        _ => match flags.ramp_width {
            Some(w) => algorithm3_ramped(signal, eta, n, w, &opts, ops)?,
            None => algorithm3(signal, eta, n, &opts, ops)?,
        },
    })
}

/// Error of every prefix `a_0 ..= a_n`, one column per `eta`.
fn error_curves<T: Real>(args: &BenchArgs, signal: &SampledSignal, r: &Resolved) -> Result<Table, Failure> {
    let ops = SeriesOperators::new(policy(&args.transform));
    let tapered = signal.tapered(args.transform.taper)?;
    let times = tapered.times();
    let integrand = oracle_integrand(args, &tapered);
    let n = r.ncoeff;
    let curves = r
        .etas
        .par_iter()
        .map(|&eta| {
            let a = spectrum::<T>(args, signal, eta, n, &ops)?;
            let basis = ReconstructionBasis::new(eta, &times, n, ops.policy())?;
            let eps = basis.prefix_errors(&a, tapered.values())?;
            let oracle = match r.oracle_step {
                Some(h) => {
                    let q = rectangle_coefficients(&integrand, eta, n, h, r.duration, ops.policy())?;
                    Some((basis.prefix_errors(&q.spectrum, tapered.values())?, q.warning.map(|w| w.to_string())))
                }
                None => None,
            };
            Ok((eps, oracle))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let mut columns = vec!["n".to_string()];
    columns.extend(r.etas.iter().map(|e| format!("eps_eta_{e}")));
    if r.oracle_step.is_some() {
        columns.extend(r.etas.iter().map(|e| format!("rect_eta_{e}")));
    }
    let mut ns: Vec<usize> = (0..=n).step_by(args.n_step).collect();
    if ns.last() != Some(&n) {
        ns.push(n);
    }
    let rows = ns
        .iter()
        .map(|&m| {
            let mut row = vec![m as f64];
            row.extend(curves.iter().map(|(e, _)| e[m]));
            row.extend(curves.iter().filter_map(|(_, o)| o.as_ref().map(|(e, _)| e[m])));
            row
        })
        .collect();
    let mut notes = Vec::new();
    for (eta, (eps, oracle)) in r.etas.iter().zip(&curves) {
        let (best, at) = eps.iter().enumerate().fold((f64::INFINITY, 0), |b, (m, &e)| if e < b.0 { (e, m) } else { b });
        notes.push(format!("eta {eta}: smallest epsilon {best:e} at n = {at}"));
        if let Some((_, Some(w))) = oracle {
            notes.push(format!("eta {eta}: {w}"));
        }
    }
    Ok(Table { columns, rows, notes })
}

/// Algorithm 4 timings, one row per `(eta, p)`; the fastest of the repeats is kept.
fn timing_table<T: Real>(args: &BenchArgs, signal: &SampledSignal, r: &Resolved) -> Result<Table, Failure> {
    let flags = &args.transform;
    let ops = SeriesOperators::new(policy(flags));
    let tapered = signal.tapered(flags.taper)?;
    let times = tapered.times();
    let integrand = oracle_integrand(args, &tapered);
    let n = r.ncoeff;
    let mut columns: Vec<String> =
        ["eta", "p", "local_count", "total_local_coefficients", "epsilon"].iter().map(|s| s.to_string()).collect();
    if r.oracle_step.is_some() {
        columns.push("rect_epsilon".into());
    }
    columns.extend(["prep_s", "step1_s", "step2_s", "total_s"].iter().map(|s| s.to_string()));
    let mut rows = Vec::new();
    let mut notes = vec!["timing columns vary from run to run".to_string()];
    for &eta in &r.etas {
        let basis = ReconstructionBasis::new(eta, &times, n, ops.policy())?;
        let rect = match r.oracle_step {
            Some(h) => {
                let q = rectangle_coefficients(&integrand, eta, n, h, r.duration, ops.policy())?;
                if let Some(w) = q.warning {
                    notes.push(format!("eta {eta}: {w}"));
                }
                Some(relative_error(tapered.values(), &basis.evaluate(&q.spectrum)?)?)
            }
            None => None,
        };
        for &p in &r.segments {
            let nominal = signal.duration() / p.max(1) as f64;
            let seg = SegmentOptions {
                segments: p,
                buffer_fraction: flags.buffer_width.map_or(0.1, |w| w / nominal),
                local_count: flags.local_count,
                method: flags.local_method.into(),
                transform: options(flags),
            };
            let mut best: Option<(LaguerreSpectrum<T>, usize, usize, SegmentTimings)> = None;
            for _ in 0..args.repeats {
                let (a, rep) = algorithm4::<T>(signal, eta, n, &seg, &ops)?;
                if best.as_ref().is_none_or(|b| rep.timings.total < b.3.total) {
                    best = Some((a, rep.local_count, rep.total_local_coefficients, rep.timings));
                }
            }
            let (a, local, total_local, t) = best.expect("at least one repeat");
            let eps = relative_error(tapered.values(), &basis.evaluate(&a)?)?;
            let mut row = vec![eta, p as f64, local as f64, total_local as f64, eps];
            row.extend(rect);
            row.extend([t.prep, t.step1, t.step2, t.total].iter().map(|d| d.as_secs_f64()));
            notes.push(format!(
                "eta {eta} p {p}: epsilon {eps:e}, step 1 {:.4} s, step 2 {:.4} s, total {:.4} s",
                t.step1.as_secs_f64(),
                t.step2.as_secs_f64(),
                t.total.as_secs_f64()
            ));
            rows.push(row);
        }
    }
    Ok(Table { columns, rows, notes })
}
