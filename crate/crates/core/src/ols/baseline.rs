//! Frequency-domain convolution without segmentation: the whole signal and
//! every filter are zero-padded to one long power-of-two transform.

use num_complex::Complex;

use super::Engine;
use crate::error::{Error, Result};
use crate::fft::{Direction, FftPlan, FftVariant};
use crate::postproc::{self, PostProc};
use crate::types::{Domain, FilterSet, Real, Samples, Signal};

/// Default cap on the padded transform length (2^25 samples).
pub const DEFAULT_MAX_BUFFER_LEN: usize = 1 << 25;

/// Padded transform length for a full linear convolution: the next power of
/// two of at least `N_s + M - 1` (and at least 8).
pub fn full_fft_len(signal_len: usize, filter_len: usize) -> usize {
    (signal_len + filter_len - 1).next_power_of_two().max(8)
}

impl Engine {
    /// Convolves with one long transform per filter. Real signal with real
    /// filters takes the packed real path; anything else runs complex.
    pub fn full_fft_convolve<T: Real>(
        &self,
        signal: &Signal<T>,
        filters: &FilterSet<T>,
        postproc: &PostProc,
    ) -> Result<Vec<Samples<T>>> {
        if signal.domain() != Domain::Time {
            return Err(Error::DomainMismatch);
        }
        let ns = signal.len();
        let len = full_fft_len(ns, filters.tap_length());
        if len > self.max_buffer_len {
            return Err(Error::TooLarge {
                len,
                budget: self.max_buffer_len,
            });
        }
        let origin = filters.origin();
        let mut rows: Vec<Option<Samples<T>>> = vec![None; filters.len()];
        let slots: Vec<&mut Option<Samples<T>>> = rows.iter_mut().collect();

        match signal.samples() {
            Samples::Real(s) if filters.taps().iter().all(|t| t.as_real().is_some()) => {
                let fft = FftPlan::<T>::with_max_len(len, FftVariant::RealPacked, len)?;
                let mut padded = vec![T::zero(); len];
                padded[..ns].copy_from_slice(s);
                let mut signal_bins = vec![Complex::default(); len / 2 + 1];
                fft.rfft(&padded, &mut signal_bins)?;
                drop(padded);
                let signal_bins = &signal_bins;
                let fft = &fft;
                self.for_each_indexed(
                    slots,
                    || (vec![T::zero(); len], vec![Complex::default(); len / 2 + 1], vec![Complex::default(); len]),
                    |(time, bins, scratch), f, slot| {
                        let taps = filters.taps()[f].as_real().expect("checked real");
                        time.fill(T::zero());
                        time[..taps.len()].copy_from_slice(taps);
                        fft.rfft_with_scratch(time, bins, scratch).expect("buffers match the plan");
                        for (b, s) in bins.iter_mut().zip(signal_bins) {
                            *b *= s;
                        }
                        fft.irfft_with_scratch(bins, time, scratch).expect("buffers match the plan");
                        *slot = Some(Samples::Real(time[origin..origin + ns].to_vec()));
                    },
                );
            }
            samples => {
                let fft = FftPlan::<T>::with_max_len(len, FftVariant::Stockham, len)?;
                let mut signal_bins = vec![Complex::default(); len];
                for (i, b) in signal_bins.iter_mut().take(ns).enumerate() {
                    *b = samples.get(i);
                }
                fft.stockham(&mut signal_bins, Direction::Forward)?;
                let signal_bins = &signal_bins;
                let fft = &fft;
                self.for_each_indexed(
                    slots,
                    || (vec![Complex::default(); len], vec![Complex::default(); len]),
                    |(work, scratch), f, slot| {
                        let taps = &filters.taps()[f];
                        work.fill(Complex::default());
                        for (k, w) in work.iter_mut().take(taps.len()).enumerate() {
                            *w = taps.get(k);
                        }
                        fft.stockham_with_scratch(work, scratch, Direction::Forward)
                            .expect("buffers match the plan");
                        for (w, s) in work.iter_mut().zip(signal_bins) {
                            *w *= s;
                        }
                        fft.stockham_with_scratch(work, scratch, Direction::Inverse)
                            .expect("buffers match the plan");
                        *slot = Some(Samples::Complex(work[origin..origin + ns].to_vec()));
                    },
                );
            }
        }

        rows.into_iter()
            .map(|r| postproc::apply_global(&r.expect("every filter processed"), postproc))
            .collect()
    }
}
