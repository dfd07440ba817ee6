//! Direct time-domain convolution, the reference every fast path is checked
//! against.
//!
//! `y[n] = sum_{k=0}^{M-1} h[k] * s[n - k + o]` for `n` in `0..N_s`, with `s`
//! read as zero outside `0..N_s`. Accumulation is always in `f64`.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::types::{Domain, FilterSet, Real, Samples, Signal};

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult<T> {
    /// One sequence of length `N_s` per filter.
    pub outputs: Vec<Samples<T>>,
}

const CHUNK: usize = 4096;

pub fn direct_convolve<T: Real>(signal: &Signal<T>, filters: &FilterSet<T>) -> Result<OracleResult<T>> {
    if signal.domain() != Domain::Time {
        return Err(Error::DomainMismatch);
    }
    let origin = filters.origin();
    let outputs = match signal.samples() {
        Samples::Real(s) => {
            let s: Vec<f64> = s.iter().map(|x| x.as_f64()).collect();
            filters
                .taps()
                .iter()
                .map(|taps| match taps {
                    Samples::Real(h) => {
                        let h: Vec<f64> = h.iter().map(|x| x.as_f64()).collect();
                        Samples::Real(convolve_real(&s, &h, origin).into_iter().map(T::lit).collect())
                    }
                    Samples::Complex(_) => {
                        let s: Vec<Complex<f64>> = s.iter().map(|&x| Complex::new(x, 0.0)).collect();
                        Samples::Complex(narrow(convolve_complex(&s, &widen(taps), origin)))
                    }
                })
                .collect()
        }
        Samples::Complex(_) => {
            let s = widen(signal.samples());
            filters
                .taps()
                .iter()
                .map(|taps| Samples::Complex(narrow(convolve_complex(&s, &widen(taps), origin))))
                .collect()
        }
    };
    Ok(OracleResult { outputs })
}

fn widen<T: Real>(samples: &Samples<T>) -> Vec<Complex<f64>> {
    (0..samples.len())
        .map(|i| {
            let z = samples.get(i);
            Complex::new(z.re.as_f64(), z.im.as_f64())
        })
        .collect()
}

fn narrow<T: Real>(v: Vec<Complex<f64>>) -> Vec<Complex<T>> {
    v.into_iter()
        .map(|z| Complex::new(T::lit(z.re), T::lit(z.im)))
        .collect()
}

/// Range of taps `k` with `0 <= m - k < len` for causal index `m`.
fn tap_range(m: usize, taps: usize, len: usize) -> (usize, usize) {
    let lo = (m + 1).saturating_sub(len);
    let hi = taps.min(m + 1);
    (lo, hi)
}

fn convolve_real(s: &[f64], h: &[f64], origin: usize) -> Vec<f64> {
    let mut out = vec![0.0; s.len()];
    out.par_chunks_mut(CHUNK).enumerate().for_each(|(c, chunk)| {
        for (i, y) in chunk.iter_mut().enumerate() {
            let m = c * CHUNK + i + origin;
            let (lo, hi) = tap_range(m, h.len(), s.len());
            if lo >= hi {
                continue;
            }
            // taps lo..hi pair with samples m-lo down to m-hi+1
            let taps = &h[lo..hi];
            let window = &s[m + 1 - hi..=m - lo];
            let mut acc = [0.0f64; 4];
            let mut tc = taps.chunks_exact(4);
            let mut wc = window.rchunks_exact(4);
            for (t, w) in (&mut tc).zip(&mut wc) {
                acc[0] += t[0] * w[3];
                acc[1] += t[1] * w[2];
                acc[2] += t[2] * w[1];
                acc[3] += t[3] * w[0];
            }
            let mut tail = 0.0;
            for (t, w) in tc.remainder().iter().zip(wc.remainder().iter().rev()) {
                tail += t * w;
            }
            *y = (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail;
        }
    });
    out
}

fn convolve_complex(s: &[Complex<f64>], h: &[Complex<f64>], origin: usize) -> Vec<Complex<f64>> {
    let mut out = vec![Complex::new(0.0, 0.0); s.len()];
    out.par_chunks_mut(CHUNK).enumerate().for_each(|(c, chunk)| {
        for (i, y) in chunk.iter_mut().enumerate() {
            let m = c * CHUNK + i + origin;
            let (lo, hi) = tap_range(m, h.len(), s.len());
            let (mut re, mut im) = (0.0, 0.0);
            for k in lo..hi {
                let a = h[k];
                let b = s[m - k];
                re += a.re * b.re - a.im * b.im;
                im += a.re * b.im + a.im * b.re;
            }
            *y = Complex::new(re, im);
        }
    });
    out
}

/// Largest absolute difference divided by the peak magnitude of `reference`
/// (plain absolute error when the reference is all zeros). Infinite when the
/// shapes differ.
pub fn max_relative_error<T: Real>(actual: &Samples<T>, reference: &Samples<T>) -> f64 {
    if actual.len() != reference.len() || actual.kind() != reference.kind() {
        return f64::INFINITY;
    }
    let mut peak = 0.0f64;
    let mut worst = 0.0f64;
    for i in 0..actual.len() {
        let a = actual.get(i);
        let r = reference.get(i);
        let diff = Complex::new((a.re - r.re).as_f64(), (a.im - r.im).as_f64()).norm();
        let mag = Complex::new(r.re.as_f64(), r.im.as_f64()).norm();
        // NaN compares false; force it to register as an error.
        worst = if diff.is_nan() { f64::INFINITY } else { worst.max(diff) };
        peak = peak.max(mag);
    }
    if peak > 0.0 {
        worst / peak
    } else {
        worst
    }
}
