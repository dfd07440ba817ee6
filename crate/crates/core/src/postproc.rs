//! Post-processing applied between the inverse transform and the output
//! store.
//!
//! Per-element kinds (scale, magnitude squared) need nothing beyond the
//! sample itself. The derivative is non-local: it reads one neighbour on each
//! side, so a segment must carry a one-sample halo of correctly convolved
//! values around its output span.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{Real, Samples};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum PostProc {
    #[default]
    None,
    /// Multiply every sample by a constant.
    Scale(f64),
    /// `re^2 + im^2`; always produces real output.
    MagnitudeSquared,
    /// Central difference `(y[n+1] - y[n-1]) / 2`, one-sided at the first
    /// and last sample of the signal.
    Derivative,
}

impl PostProc {
    /// Neighbour samples needed on each side of an output span.
    pub fn halo(&self) -> usize {
        match self {
            PostProc::Derivative => 1,
            _ => 0,
        }
    }

    pub fn output_is_real(&self) -> bool {
        matches!(self, PostProc::MagnitudeSquared)
    }
}

impl fmt::Display for PostProc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PostProc::None => f.write_str("none"),
            PostProc::Scale(c) => write!(f, "scale:{c}"),
            PostProc::MagnitudeSquared => f.write_str("magnitude_squared"),
            PostProc::Derivative => f.write_str("derivative"),
        }
    }
}

impl FromStr for PostProc {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(PostProc::None),
            "magnitude_squared" | "magsq" => Ok(PostProc::MagnitudeSquared),
            "derivative" => Ok(PostProc::Derivative),
            other => match other.strip_prefix("scale:") {
                Some(c) => c
                    .parse::<f64>()
                    .ok()
                    .filter(|c| c.is_finite())
                    .map(PostProc::Scale)
                    .ok_or_else(|| Error::Parse(format!("bad scale factor in `{other}`"))),
                None => Err(Error::Parse(format!("unknown post-processing `{other}`"))),
            },
        }
    }
}

impl From<PostProc> for String {
    fn from(p: PostProc) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for PostProc {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Where a block of convolved values sits in the full output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    /// Global index of the first output sample.
    pub start: usize,
    /// Number of output samples to produce.
    pub len: usize,
    /// Offset of `y[start]` inside the value slice.
    pub halo: usize,
    /// Total signal length, to locate the global boundaries.
    pub signal_len: usize,
}

impl Window {
    fn check(&self, values: usize, spec: &PostProc) -> Result<()> {
        let (left, right) = match spec {
            PostProc::Derivative => (
                usize::from(self.start > 0 && self.len > 0),
                usize::from(self.start + self.len < self.signal_len),
            ),
            _ => (0, 0),
        };
        if self.halo < left || values < self.halo + self.len + right {
            return Err(Error::HaloUnavailable {
                needed: left.max(right),
                available: values.saturating_sub(self.len),
            });
        }
        Ok(())
    }
}

/// Sample types post-processing can run over.
pub trait PostSample<T>: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self> {
    fn magnitude_squared(self) -> T;
}

impl<T: Real> PostSample<T> for T {
    fn magnitude_squared(self) -> T {
        self * self
    }
}

impl<T: Real> PostSample<T> for Complex<T> {
    fn magnitude_squared(self) -> T {
        self.norm_sqr()
    }
}

/// Writes `out.len()` post-processed samples for a value-preserving kind
/// (everything except magnitude squared, which goes through
/// [`magnitude_squared_into`]). `values[window.halo + i]` is `y[window.start + i]`.
pub fn apply_into<T: Real, S: PostSample<T>>(values: &[S], spec: &PostProc, window: Window, out: &mut [S]) {
    let h = window.halo;
    let ys = &values[h..h + out.len()];
    match *spec {
        PostProc::None => out.copy_from_slice(ys),
        PostProc::Scale(c) => {
            let c = T::lit(c);
            for (o, &y) in out.iter_mut().zip(ys) {
                *o = y * c;
            }
        }
        PostProc::MagnitudeSquared => unreachable!("magnitude squared changes the sample type"),
        PostProc::Derivative => {
            let half = T::lit(0.5);
            let last = window.signal_len - 1;
            for (i, o) in out.iter_mut().enumerate() {
                let n = window.start + i;
                let j = h + i;
                *o = if last == 0 {
                    values[j] * T::zero()
                } else if n == 0 {
                    values[j + 1] - values[j]
                } else if n == last {
                    values[j] - values[j - 1]
                } else {
                    (values[j + 1] - values[j - 1]) * half
                };
            }
        }
    }
}

pub fn magnitude_squared_into<T: Real, S: PostSample<T>>(values: &[S], window: Window, out: &mut [T]) {
    let ys = &values[window.halo..window.halo + out.len()];
    for (o, &y) in out.iter_mut().zip(ys) {
        *o = y.magnitude_squared();
    }
}

/// Applies `spec` to a block of convolved values, returning `window.len`
/// samples.
pub fn apply_postproc<T: Real>(values: &Samples<T>, spec: &PostProc, window: Window) -> Result<Samples<T>> {
    window.check(values.len(), spec)?;
    Ok(match (values, spec) {
        (Samples::Real(v), PostProc::MagnitudeSquared) => {
            let mut out = vec![T::zero(); window.len];
            magnitude_squared_into(v, window, &mut out);
            Samples::Real(out)
        }
        (Samples::Complex(v), PostProc::MagnitudeSquared) => {
            let mut out = vec![T::zero(); window.len];
            magnitude_squared_into(v, window, &mut out);
            Samples::Real(out)
        }
        (Samples::Real(v), _) => {
            let mut out = vec![T::zero(); window.len];
            apply_into(v, spec, window, &mut out);
            Samples::Real(out)
        }
        (Samples::Complex(v), _) => {
            let mut out = vec![Complex::default(); window.len];
            apply_into(v, spec, window, &mut out);
            Samples::Complex(out)
        }
    })
}

/// Applies `spec` to a complete output sequence.
pub fn apply_global<T: Real>(values: &Samples<T>, spec: &PostProc) -> Result<Samples<T>> {
    let window = Window {
        start: 0,
        len: values.len(),
        halo: 0,
        signal_len: values.len(),
    };
    apply_postproc(values, spec, window)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_ramp() {
        let y = Samples::Real(vec![1.0f64, 2.0, 3.0, 4.0, 5.0]);
        let w = Window {
            start: 1,
            len: 3,
            halo: 1,
            signal_len: 100,
        };
        assert_eq!(apply_postproc(&y, &PostProc::Derivative, w).unwrap(), Samples::Real(vec![1.0; 3]));
    }

    #[test]
    fn derivative_boundaries_are_one_sided() {
        let y = Samples::Real(vec![0.0f64, 1.0, 4.0, 9.0]);
        let d = apply_global(&y, &PostProc::Derivative).unwrap();
        assert_eq!(d, Samples::Real(vec![1.0, 2.0, 4.0, 5.0]));
        let single = apply_global(&Samples::Real(vec![3.0f64]), &PostProc::Derivative).unwrap();
        assert_eq!(single, Samples::Real(vec![0.0]));
    }

    #[test]
    fn derivative_needs_halo() {
        let y = Samples::Real(vec![1.0f64, 2.0, 3.0]);
        let w = Window {
            start: 5,
            len: 3,
            halo: 0,
            signal_len: 100,
        };
        assert!(matches!(
            apply_postproc(&y, &PostProc::Derivative, w),
            Err(Error::HaloUnavailable { .. })
        ));
        // Same window is fine for local kinds.
        assert!(apply_postproc(&y, &PostProc::Scale(2.0), w).is_ok());
    }

    #[test]
    fn magnitude_squared_complex() {
        let y = Samples::Complex(vec![Complex::new(3.0f32, 4.0)]);
        let out = apply_global(&y, &PostProc::MagnitudeSquared).unwrap();
        assert_eq!(out, Samples::Real(vec![25.0]));
    }

    #[test]
    fn scale_and_none() {
        let y = Samples::Complex(vec![Complex::new(1.0f64, -2.0)]);
        assert_eq!(apply_global(&y, &PostProc::Scale(-0.5)).unwrap(), Samples::Complex(vec![Complex::new(-0.5, 1.0)]));
        assert_eq!(apply_global(&y, &PostProc::None).unwrap(), y);
    }

    #[test]
    fn output_length_is_preserved() {
        let y = Samples::Real((0..17).map(|i| i as f64).collect());
        for spec in [PostProc::None, PostProc::Scale(3.0), PostProc::MagnitudeSquared, PostProc::Derivative] {
            assert_eq!(apply_global(&y, &spec).unwrap().len(), 17);
        }
    }

    #[test]
    fn parse_round_trip() {
        for spec in [PostProc::None, PostProc::Scale(2.5), PostProc::MagnitudeSquared, PostProc::Derivative] {
            assert_eq!(spec.to_string().parse::<PostProc>().unwrap(), spec);
        }
        assert_eq!("magsq".parse::<PostProc>().unwrap(), PostProc::MagnitudeSquared);
        assert!("scale:x".parse::<PostProc>().is_err());
        assert!("interpolate".parse::<PostProc>().is_err());
    }
}
