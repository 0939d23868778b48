//! Floating-point abstraction over `f32` and `f64`.

use std::cell::RefCell;
use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FloatConst};
use rustfft::{FftNum, FftPlanner};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// Working precision selected at run time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Precision {
    #[serde(rename = "f32")]
    Single,
    #[serde(rename = "f64")]
    Double,
}

impl Display for Precision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Precision::Single => "f32",
            Precision::Double => "f64",
        })
    }
}

impl FromStr for Precision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "f32" | "single" => Ok(Precision::Single),
            "f64" | "double" => Ok(Precision::Double),
            other => Err(format!("unknown precision `{other}` (expected f32 or f64)")),
        }
    }
}

/// Scalar type a transform can run in.
pub trait Real:
    FftNum + Float + FloatConst + Sum + Default + Debug + Display + LowerExp + Serialize + DeserializeOwned
{
    const PRECISION: Precision;

    /// Round an `f64` to this type.
    fn cast(x: f64) -> Self;

    /// Exact widening to `f64`.
    fn widen(self) -> f64;

    /// Run `f` with this thread's cached FFT planner.
    fn with_planner<R>(f: impl FnOnce(&mut FftPlanner<Self>) -> R) -> R;
}

thread_local! {
    static PLANNER_F32: RefCell<FftPlanner<f32>> = RefCell::new(FftPlanner::new());
    static PLANNER_F64: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

impl Real for f32 {
    const PRECISION: Precision = Precision::Single;

    #[inline]
    fn cast(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn widen(self) -> f64 {
        self as f64
    }

    fn with_planner<R>(f: impl FnOnce(&mut FftPlanner<Self>) -> R) -> R {
        PLANNER_F32.with(|p| f(&mut p.borrow_mut()))
    }
}

impl Real for f64 {
    const PRECISION: Precision = Precision::Double;

    #[inline]
    fn cast(x: f64) -> Self {
        x
    }

    #[inline]
    fn widen(self) -> f64 {
        self
    }

    fn with_planner<R>(f: impl FnOnce(&mut FftPlanner<Self>) -> R) -> R {
        PLANNER_F64.with(|p| f(&mut p.borrow_mut()))
    }
}
