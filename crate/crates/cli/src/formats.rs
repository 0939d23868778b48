//! Signal and spectrum files.
//!
//! Signals are CSV, one value per line under a `# step=<h>` header, or raw
//! little-endian `f32` with a sidecar `<stem>.json` holding `{"step": h}`.
//! Spectra are JSON objects with at least `eta`, `duration` and `coeffs`.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use lagt_core::{LaguerreSpectrum, SampledSignal};
use serde::{Deserialize, Serialize};

pub const SIGNAL_EXTENSIONS: [&str; 3] = ["csv", "f32", "bin"];

pub fn is_signal_file(path: &Path) -> bool {
    path.is_file()
        && path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| SIGNAL_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
}

pub fn read_signal(path: &Path) -> Result<SampledSignal> {
    match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
        Some("csv") => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_csv(&text).with_context(|| format!("parsing {}", path.display()))
        }
        Some("f32" | "bin") => read_raw(path),
        _ => bail!("{}: unsupported signal format (expected .csv, .f32 or .bin)", path.display()),
    }
}

pub fn parse_csv(text: &str) -> Result<SampledSignal> {
    let mut step = None;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            for token in comment.split_whitespace() {
                if let Some(v) = token.strip_prefix("step=") {
                    step = Some(v.parse::<f64>().map_err(|e| anyhow!("line {}: bad step `{v}`: {e}", i + 1))?);
                }
            }
            continue;
        }
        let v = line.parse::<f64>().map_err(|e| anyhow!("line {}: bad value `{line}`: {e}", i + 1))?;
        values.push(v);
    }
    let step = step.ok_or_else(|| anyhow!("missing `# step=` header"))?;
    Ok(SampledSignal::new(values, step)?)
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

#[derive(Debug, Deserialize)]
struct Sidecar {
    step: f64,
}

fn read_raw(path: &Path) -> Result<SampledSignal> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    if bytes.len() % 4 != 0 {
        bail!("{}: {} bytes is not a whole number of f32 values", path.display(), bytes.len());
    }
    let side = sidecar_path(path);
    let text = fs::read_to_string(&side).with_context(|| format!("reading sidecar {}", side.display()))?;
    let sidecar: Sidecar = serde_json::from_str(&text).with_context(|| format!("parsing {}", side.display()))?;
    let values = bytes
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
        .collect();
    SampledSignal::new(values, sidecar.step).with_context(|| format!("{}", path.display()))
}

/// CSV text of a signal; `comments` become extra `#` lines after the header.
pub fn csv_text(signal: &SampledSignal, comments: &[String]) -> String {
    let mut out = format!("# step={}\n", signal.step());
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    for &v in signal.values() {
        out.push_str(&format_number(v));
        out.push('\n');
    }
    out
}

/// Shortest round-trip form, with an exponent outside `[1e-4, 1e7)`.
pub fn format_number(v: f64) -> String {
    if v == 0.0 || (1e-4..1e7).contains(&v.abs()) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

/// The fields every spectrum file carries.
#[derive(Debug, Serialize, Deserialize)]
pub struct SpectrumFile {
    pub eta: f64,
    pub duration: f64,
    /// Step of the signal the spectrum came from, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    pub coeffs: Vec<f64>,
}

impl SpectrumFile {
    pub fn spectrum(&self) -> Result<LaguerreSpectrum<f64>> {
        if self.coeffs.is_empty() {
            bail!("spectrum has no coefficients");
        }
        if self.duration.is_nan() || self.duration <= 0.0 {
            bail!("spectrum duration must be positive, got {}", self.duration);
        }
        Ok(LaguerreSpectrum::new(self.coeffs.clone(), self.eta, self.duration)?)
    }
}

pub fn read_spectrum(path: &Path) -> Result<SpectrumFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: SpectrumFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.spectrum().with_context(|| format!("{}", path.display()))?;
    Ok(file)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
