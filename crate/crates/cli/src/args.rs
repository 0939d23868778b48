use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lagt_core::segmented_transform::LocalMethod;
use lagt_core::Precision;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "lagt", version, about = "Laguerre transforms of sampled signals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transform signal files into Laguerre spectra
    Forward(ForwardArgs),
    /// Synthesise samples on a uniform grid from a spectrum file
    Inverse(InverseArgs),
    /// Error curves and segmented timing tables on a built-in fixture
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Truncation {
    /// Cut where the partial energy meets the signal energy
    Energy,
    /// Remove the part of the series beyond the signal duration
    Conjugation,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Matrix,
    Recursion,
}

impl From<Method> for LocalMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Matrix => LocalMethod::Matrix,
            Method::Recursion => LocalMethod::Recursion,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Fixture {
    /// Gaussian-modulated 30 Hz sine centred at 0.5 s
    Source,
    /// The same pulse centred at 0.02 s, far from zero at the origin
    Ramped,
    /// Seeded clipped Ricker wavelets
    Bursts,
}

fn parse_precision(s: &str) -> Result<Precision, String> {
    s.parse()
}

/// Flags shared by `forward` and `bench`.
#[derive(Debug, Clone, Args, Serialize)]
pub struct TransformFlags {
    /// Working precision, f32 or f64
    #[arg(long, default_value = "f64", value_parser = parse_precision)]
    pub precision: Precision,
    /// Highest Fourier index used (default: the Nyquist index)
    #[arg(long)]
    pub nfreq: Option<usize>,
    /// Zero-padding factor of algorithm 1
    #[arg(long, default_value_t = 2.0)]
    pub extension: f64,
    /// Crossfade width of algorithm 4 in time units (default: a tenth of a segment)
    #[arg(long)]
    pub buffer_width: Option<f64>,
    /// Coefficients per segment in algorithm 4 (default: ceil((n + 1) / p))
    #[arg(long)]
    pub local_count: Option<usize>,
    /// Local transform of algorithm 4
    #[arg(long, value_enum, default_value_t = Method::Matrix)]
    pub local_method: Method,
    /// Width of a sin^2 ramp prepended before transforming (algorithms 1 and 3)
    #[arg(long)]
    pub ramp_width: Option<f64>,
    /// Fraction of the duration tapered to zero at the right end
    #[arg(long, default_value_t = 0.05)]
    pub taper: f64,
    /// Evaluate past the recurrence guard by repeated shift doubling
    #[arg(long)]
    pub shift_doubling: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ForwardArgs {
    /// Algorithm: 1 padded, 2 matrix, 3 recursion with copy removal, 4 segmented
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub algorithm: u8,
    /// Transform parameter
    #[arg(long)]
    pub eta: f64,
    /// Highest coefficient index n; n + 1 coefficients are computed
    #[arg(long)]
    pub ncoeff: usize,
    /// Segment count of algorithm 4, a power of two
    #[arg(long, default_value_t = 1)]
    pub segments: usize,
    /// Cut applied to the computed series (default: energy for algorithm 1, none otherwise)
    #[arg(long, value_enum)]
    pub truncation: Option<Truncation>,
    #[command(flatten)]
    pub transform: TransformFlags,
    /// Output file, or directory for a directory input
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Signal file (.csv, or .f32/.bin with a .json sidecar) or a directory of them
    pub input: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InverseArgs {
    /// Grid step (default: the step recorded in the spectrum file)
    #[arg(long)]
    pub step: Option<f64>,
    /// Grid duration (default: the spectrum duration)
    #[arg(long)]
    pub duration: Option<f64>,
    /// Go through Fourier coefficients and an inverse FFT instead of direct synthesis
    #[arg(long)]
    pub via_fourier: bool,
    /// Evaluate past the recurrence guard by repeated shift doubling
    #[arg(long)]
    pub shift_doubling: bool,
    /// Output CSV (default: the spectrum path with a .csv extension)
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Spectrum JSON file
    pub spectrum: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BenchArgs {
    pub fixture: Fixture,
    /// Transform parameters, as start:stop:step or a comma list (default: 800, or 600 for bursts)
    #[arg(long)]
    pub etas: Option<String>,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub algorithm: u8,
    /// Highest coefficient index (default: 1200, or 2047 for bursts)
    #[arg(long)]
    pub ncoeff: Option<usize>,
    /// Spacing of the n rows in error curves
    #[arg(long, default_value_t = 10)]
    pub n_step: usize,
    /// Sampling step of the fixture (default: 0.002, or 0.004 for bursts)
    #[arg(long)]
    pub step: Option<f64>,
    /// Duration of the fixture (default: 1, or 4 for bursts)
    #[arg(long)]
    pub duration: Option<f64>,
    /// Seed of the bursts fixture
    #[arg(long, default_value_t = lagt_core::fixtures::BURSTS_SEED)]
    pub seed: u64,
    /// Segment counts timed by algorithm 4, comma separated
    #[arg(long, default_value = "1")]
    pub segments: String,
    /// Timed runs per row of the algorithm 4 table; the fastest is kept
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    /// Add rectangle-rule quadrature columns
    #[arg(long)]
    pub oracle: bool,
    /// Step of the rectangle rule (default: a tenth of the sampling step)
    #[arg(long)]
    pub oracle_step: Option<f64>,
    #[command(flatten)]
    pub transform: TransformFlags,
    /// Output prefix; PREFIX.csv and PREFIX.json are written
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}
