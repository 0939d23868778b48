use lagt_core::reconstruction::{inverse_dft, reconstruct_uniform, spectrum_to_fourier};
use lagt_core::series_operators::SeriesOperators;
use lagt_core::transport_transform::build_transform_matrix;
use lagt_core::EvalPolicy;

use crate::args::InverseArgs;
use crate::failure::Failure;
use crate::formats;
use crate::provenance::Provenance;

pub fn run(args: &InverseArgs) -> Result<(), Failure> {
    let file = formats::read_spectrum(&args.spectrum).map_err(|e| Failure::io(format!("{e:#}")))?;
    let a = file.spectrum().map_err(|e| Failure::io(format!("{e:#}")))?;
    let step = args
        .step
        .or(file.step)
        .ok_or_else(|| Failure::usage("no --step given and the spectrum file records none"))?;
    let duration = args.duration.unwrap_or(a.duration());
    if !(step.is_finite() && step > 0.0 && duration.is_finite() && duration > 0.0) {
        return Err(Failure::usage("--step and --duration must be positive"));
    }
    let samples = (duration / step).round() as usize;
    if samples < 2 {
        return Err(Failure::usage(format!("a grid of step {step} over {duration} has fewer than two samples")));
    }
    let policy = if args.shift_doubling { EvalPolicy::with_doubling() } else { EvalPolicy::default() };
    let signal = if args.via_fourier {
        if (duration - a.duration()).abs() > 1e-9 * a.duration() {
            return Err(Failure::usage(format!(
                "the Fourier route samples the spectrum's own interval [0, {}]",
                a.duration()
            )));
        }
        let ops = SeriesOperators::new(policy);
        let m = build_transform_matrix::<f64>(a.eta(), a.len() - 1, samples / 2, a.duration(), false, &ops)?;
        inverse_dft(&spectrum_to_fourier(&a, &m, samples)?)?
    } else {
        reconstruct_uniform(&a, step, samples, &policy)?
    };
    let header = serde_json::to_string(&Provenance::new("inverse", Some(&args.spectrum), args)).map_err(Failure::io)?;
    let out = args.output.clone().unwrap_or_else(|| args.spectrum.with_extension("csv"));
    formats::write_text(&out, &formats::csv_text(&signal, &[format!("provenance {header}")]))
        .map_err(|e| Failure::io(format!("{e:#}")))?;
    println!("{} -> {}: {} samples", args.spectrum.display(), out.display(), signal.len());
    Ok(())
}
