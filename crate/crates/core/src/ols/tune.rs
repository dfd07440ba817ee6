use std::time::Instant;

use super::{transform_filters, Engine, EngineVariant, Mode, SegmentPlan, SegmentSize};
use crate::error::{Error, Result};
use crate::postproc::PostProc;
use crate::synth;
use crate::types::{Real, ValueKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TuneOptions {
    /// Probe signal length.
    pub probe_len: usize,
    pub filters: usize,
    /// Timed runs per candidate; the median is kept.
    pub repeats: usize,
    pub seed: u64,
}

impl Default for TuneOptions {
    fn default() -> Self {
        TuneOptions {
            probe_len: 1 << 18,
            filters: 1,
            repeats: 3,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneReport {
    pub filter_len: usize,
    pub mode: Mode,
    pub chosen: usize,
    /// `(segment length, median seconds)` for every feasible candidate, in
    /// ascending segment length.
    pub timings: Vec<(usize, f64)>,
    /// Candidates rejected by the planner.
    pub infeasible: Vec<usize>,
}

/// Times the fused engine on a synthetic probe for each candidate segment
/// length and returns the fastest. Ties go to the smaller length.
pub fn autotune_segment_size<T: Real>(
    engine: &Engine,
    filter_len: usize,
    mode: Mode,
    candidates: &[usize],
    options: &TuneOptions,
) -> Result<TuneReport> {
    if candidates.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted = candidates.to_vec();
    sorted.sort_unstable();
    sorted.dedup();

    let kind = match mode {
        Mode::C2c => ValueKind::Complex,
        Mode::R2r => ValueKind::Real,
    };
    let signal = synth::random_signal::<T>(options.probe_len, kind, options.seed)?;
    let filters = synth::random_filters::<T>(options.filters.max(1), filter_len, ValueKind::Real, 0, options.seed ^ 1)?;

    let mut timings = Vec::new();
    let mut infeasible = Vec::new();
    for &n in &sorted {
        let plan = match SegmentPlan::new(options.probe_len, filter_len, mode, 0, SegmentSize::Fixed(n)) {
            Ok(plan) => plan,
            Err(_) => {
                infeasible.push(n);
                continue;
            }
        };
        let prepared = transform_filters(&filters, &plan, plan.layout())?;
        let mut samples = Vec::with_capacity(options.repeats.max(1));
        for _ in 0..options.repeats.max(1) {
            let start = Instant::now();
            let out = engine.convolve(&signal, &prepared, &plan, EngineVariant::Fused, &PostProc::None)?;
            samples.push(start.elapsed().as_secs_f64());
            drop(out);
        }
        timings.push((n, median(&mut samples)));
    }

    let chosen = timings
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .map(|&(n, _)| n)
        .ok_or(Error::SegmentTooSmall {
            fft_len: *sorted.last().unwrap(),
            taps: filter_len,
        })?;
    Ok(TuneReport {
        filter_len,
        mode,
        chosen,
        timings,
        infeasible,
    })
}

pub(crate) fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> TuneOptions {
        TuneOptions {
            probe_len: 4096,
            filters: 1,
            repeats: 1,
            seed: 3,
        }
    }

    #[test]
    fn single_feasible_candidate() {
        let candidates: Vec<usize> = (6..=12).map(|b| 1 << b).collect();
        let report = autotune_segment_size::<f32>(&Engine::serial(), 4000, Mode::C2c, &candidates, &quick()).unwrap();
        assert_eq!(report.chosen, 4096);
        assert_eq!(report.timings.len(), 1);
        assert_eq!(report.infeasible.len(), 6);
    }

    #[test]
    fn picks_some_candidate() {
        let candidates = [64, 256, 1024];
        let report = autotune_segment_size::<f64>(&Engine::serial(), 1, Mode::R2r, &candidates, &quick()).unwrap();
        assert!(candidates.contains(&report.chosen));
        assert_eq!(report.timings.len(), 3);
        assert!(report.timings.iter().all(|&(_, t)| t > 0.0));
    }

    #[test]
    fn no_feasible_candidate() {
        assert!(matches!(
            autotune_segment_size::<f32>(&Engine::serial(), 300, Mode::C2c, &[64, 128], &quick()),
            Err(Error::SegmentTooSmall { fft_len: 128, taps: 300 })
        ));
        assert!(matches!(
            autotune_segment_size::<f32>(&Engine::serial(), 3, Mode::C2c, &[], &quick()),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn median_odd_even() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
