use std::ops::Range;

use num_complex::Complex;
use rayon::prelude::*;

use super::baseline::DEFAULT_MAX_BUFFER_LEN;
use super::spectra::fft_variant;
use super::{EngineVariant, Geometry, Mode, SegmentPlan};
use crate::error::{Error, Result};
use crate::fft::FftPlan;
use crate::oracle::direct_convolve;
use crate::postproc::{self, PostProc, Window};
use crate::types::{Domain, FilterSet, FilterSpectra, Real, Samples, Signal, ValueKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    /// Worker threads; 0 picks the available parallelism.
    pub workers: usize,
    /// Largest padded transform the full-FFT baseline may allocate.
    pub max_buffer_len: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            workers: 0,
            max_buffer_len: DEFAULT_MAX_BUFFER_LEN,
        }
    }
}

/// Runs convolutions with a fixed degree of parallelism.
///
/// Segments are independent work items. Each writes only its own window of
/// the pre-allocated output, so workers never coordinate; plans and filter
/// spectra are shared read-only. Output is bit-identical for any worker
/// count.
pub struct Engine {
    workers: usize,
    pool: Option<rayon::ThreadPool>,
    pub(super) max_buffer_len: usize,
}

impl std::fmt::Debug for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Engine")
            .field("workers", &self.workers)
            .field("max_buffer_len", &self.max_buffer_len)
            .finish()
    }
}

impl Default for Engine {
    fn default() -> Self {
        Engine::serial()
    }
}

impl Engine {
    pub fn new(config: EngineConfig) -> Result<Self> {
        let workers = match config.workers {
            0 => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            n => n,
        };
        let pool = if workers > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .build()
                    .map_err(|e| Error::ThreadPool(e.to_string()))?,
            )
        } else {
            None
        };
        Ok(Engine {
            workers,
            pool,
            max_buffer_len: config.max_buffer_len,
        })
    }

    /// Single-threaded engine.
    pub fn serial() -> Self {
        Engine {
            workers: 1,
            pool: None,
            max_buffer_len: DEFAULT_MAX_BUFFER_LEN,
        }
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    /// Runs `work` once per item, in parallel when the engine has a pool.
    /// Each worker gets its own state from `init`.
    pub(super) fn for_each_indexed<I, W, F, G>(&self, items: Vec<I>, init: G, work: F)
    where
        I: Send,
        G: Fn() -> W + Sync + Send,
        F: Fn(&mut W, usize, I) + Sync + Send,
    {
        match &self.pool {
            None => {
                let mut state = init();
                for (i, item) in items.into_iter().enumerate() {
                    work(&mut state, i, item);
                }
            }
            Some(pool) => pool.install(|| {
                items
                    .into_par_iter()
                    .enumerate()
                    .for_each_init(&init, |state, (i, item)| work(state, i, item))
            }),
        }
    }

    /// Number of times each output index of each filter is written by the
    /// segment dispatcher for this plan and post-processing.
    pub fn coverage_counts(&self, plan: &SegmentPlan, postproc: &PostProc, filters: usize) -> Result<Vec<Vec<u32>>> {
        let geom = plan.geometry(postproc.halo())?;
        let mut rows = vec![vec![0u32; plan.signal_len()]; filters];
        let refs: Vec<&mut [u32]> = rows.iter_mut().map(|r| r.as_mut_slice()).collect();
        self.dispatch(&geom, refs, || (), |_, _, windows| {
            for w in windows.iter_mut() {
                for x in w.iter_mut() {
                    *x += 1;
                }
            }
        });
        Ok(rows)
    }

    /// Splits every output row into the geometry's disjoint windows and hands
    /// segment `s` the `s`-th window of every row.
    fn dispatch<S, W, G, F>(&self, geom: &Geometry, rows: Vec<&mut [S]>, init: G, work: F)
    where
        S: Send,
        G: Fn() -> W + Sync + Send,
        F: Fn(&mut W, usize, &mut [&mut [S]]) + Sync + Send,
    {
        let mut per_segment: Vec<Vec<&mut [S]>> = (0..geom.segments).map(|_| Vec::with_capacity(rows.len())).collect();
        for row in rows {
            debug_assert_eq!(row.len(), geom.signal_len);
            for (s, window) in row.chunks_mut(geom.stride).enumerate() {
                per_segment[s].push(window);
            }
        }
        self.for_each_indexed(per_segment, init, |state, s, mut windows| work(state, s, &mut windows));
    }

    pub fn convolve<T: Real>(
        &self,
        signal: &Signal<T>,
        filters: &FilterSet<T>,
        plan: &SegmentPlan,
        variant: EngineVariant,
        postproc: &PostProc,
    ) -> Result<Vec<Samples<T>>> {
        let kind = output_kind(plan.mode(), postproc);
        let mut out: Vec<Samples<T>> = (0..filters.len())
            .map(|_| match kind {
                ValueKind::Real => Samples::Real(vec![T::zero(); plan.signal_len()]),
                ValueKind::Complex => Samples::Complex(vec![Complex::default(); plan.signal_len()]),
            })
            .collect();
        self.convolve_into(signal, filters, plan, variant, postproc, &mut out)?;
        Ok(out)
    }

    /// As [`Self::convolve`], writing into caller-allocated rows. Each row
    /// must already have the output kind and length `N_s`.
    pub fn convolve_into<T: Real>(
        &self,
        signal: &Signal<T>,
        filters: &FilterSet<T>,
        plan: &SegmentPlan,
        variant: EngineVariant,
        postproc: &PostProc,
        out: &mut [Samples<T>],
    ) -> Result<()> {
        if signal.domain() != Domain::Time {
            return Err(Error::DomainMismatch);
        }
        check_plan(signal, filters, plan)?;
        let kind = output_kind(plan.mode(), postproc);
        if out.len() != filters.len() || out.iter().any(|r| r.len() != plan.signal_len() || r.kind() != kind) {
            return Err(Error::PlanMismatch("output rows do not match the plan".into()));
        }
        match variant {
            EngineVariant::DirectOracle => {
                let result = direct_convolve(signal, filters)?;
                copy_rows(result.outputs, postproc, kind, out)
            }
            EngineVariant::FullFftBaseline => {
                let result = self.full_fft_convolve(signal, filters, &PostProc::None)?;
                copy_rows(result, postproc, kind, out)
            }
            EngineVariant::Fused | EngineVariant::Pipelined => {
                let spectra = filters.spectra().ok_or(Error::MissingSpectra)?;
                if spectra.layout != plan.layout() {
                    return Err(Error::LayoutMismatch {
                        expected: plan.layout(),
                        found: spectra.layout,
                    });
                }
                if spectra.fft_len != plan.fft_len() {
                    return Err(Error::PlanMismatch(format!(
                        "filter spectra have length {}, plan segments {}",
                        spectra.fft_len,
                        plan.fft_len()
                    )));
                }
                let geom = plan.geometry(postproc.halo())?;
                let fft = FftPlan::<T>::with_max_len(plan.fft_len(), fft_variant(plan.layout()), plan.max_fft_len())?;
                let job = Job {
                    signal: signal.samples(),
                    spectra,
                    geom,
                    fft: &fft,
                    postproc,
                };
                match (plan.mode(), variant) {
                    (Mode::C2c, EngineVariant::Fused) => self.fused_c2c(&job, out),
                    (Mode::R2r, EngineVariant::Fused) => self.fused_r2r(&job, out),
                    (Mode::C2c, _) => self.pipelined_c2c(&job, out),
                    (Mode::R2r, _) => self.pipelined_r2r(&job, out),
                }
                Ok(())
            }
        }
    }

    fn fused_c2c<T: Real>(&self, job: &Job<'_, T>, out: &mut [Samples<T>]) {
        let n = job.geom.fft_len;
        let init = || C2cScratch::new(n);
        match job.postproc {
            PostProc::MagnitudeSquared => self.dispatch(&job.geom, real_rows(out), init, |w, s, windows| {
                job.fused_c2c_segment(w, s, windows, |v, win, o| postproc::magnitude_squared_into(v, win, o))
            }),
            spec => self.dispatch(&job.geom, complex_rows(out), init, |w, s, windows| {
                job.fused_c2c_segment(w, s, windows, |v, win, o| postproc::apply_into(v, spec, win, o))
            }),
        }
    }

    fn fused_r2r<T: Real>(&self, job: &Job<'_, T>, out: &mut [Samples<T>]) {
        let n = job.geom.fft_len;
        self.dispatch(&job.geom, real_rows(out), || R2rScratch::new(n), |w, s, windows| {
            let window = job.geom.input_window(s);
            load_real(job.signal.as_real().expect("checked real"), window, &mut w.seg);
            job.fft
                .rfft_with_scratch(&w.seg, &mut w.bins, &mut w.pong)
                .expect("segment buffers match the plan");
            for (f, dst) in windows.iter_mut().enumerate() {
                let filter = &job.spectra.bins[f];
                for ((p, a), b) in w.work.iter_mut().zip(&w.bins).zip(filter) {
                    *p = a * b;
                }
                job.fft
                    .irfft_with_scratch(&w.work, &mut w.time, &mut w.pong)
                    .expect("segment buffers match the plan");
                job.store_real(s, &w.time, dst);
            }
        });
    }

    /// Forward pass: transform every segment and store its product with each
    /// filter. Inverse pass: transform each stored product back and keep
    /// only the unaliased span. Products for the whole signal are held in
    /// memory between the passes.
    fn pipelined_c2c<T: Real>(&self, job: &Job<'_, T>, out: &mut [Samples<T>]) {
        let n = job.geom.fft_len;
        let nfil = job.spectra.bins.len();
        let mut products = vec![Complex::<T>::default(); job.geom.segments * nfil * n];
        let chunks: Vec<&mut [Complex<T>]> = products.chunks_mut(nfil * n).collect();
        self.for_each_indexed(chunks, || C2cScratch::new(n), |w, s, chunk| {
            load_complex(job.signal, job.geom.input_window(s), &mut w.seg);
            job.fft
                .forward_native(&mut w.seg, &mut w.pong)
                .expect("segment buffers match the plan");
            for (dst, filter) in chunk.chunks_mut(n).zip(&job.spectra.bins) {
                for ((p, a), b) in dst.iter_mut().zip(&w.seg).zip(filter) {
                    *p = a * b;
                }
            }
        });
        let products = &products;
        let inverse = |w: &mut C2cScratch<T>, s: usize, f: usize| {
            let start = (s * nfil + f) * n;
            w.work.copy_from_slice(&products[start..start + n]);
            job.fft
                .inverse_native(&mut w.work, &mut w.pong)
                .expect("segment buffers match the plan");
        };
        match job.postproc {
            PostProc::MagnitudeSquared => {
                self.dispatch(&job.geom, real_rows(out), || C2cScratch::new(n), |w, s, windows| {
                    for (f, dst) in windows.iter_mut().enumerate() {
                        inverse(w, s, f);
                        job.store(s, &w.work, dst, |v, win, o| postproc::magnitude_squared_into(v, win, o));
                    }
                })
            }
            spec => self.dispatch(&job.geom, complex_rows(out), || C2cScratch::new(n), |w, s, windows| {
                for (f, dst) in windows.iter_mut().enumerate() {
                    inverse(w, s, f);
                    job.store(s, &w.work, dst, |v, win, o| postproc::apply_into(v, spec, win, o));
                }
            }),
        }
    }

    fn pipelined_r2r<T: Real>(&self, job: &Job<'_, T>, out: &mut [Samples<T>]) {
        let n = job.geom.fft_len;
        let nb = n / 2 + 1;
        let nfil = job.spectra.bins.len();
        let mut products = vec![Complex::<T>::default(); job.geom.segments * nfil * nb];
        let chunks: Vec<&mut [Complex<T>]> = products.chunks_mut(nfil * nb).collect();
        self.for_each_indexed(chunks, || R2rScratch::new(n), |w, s, chunk| {
            load_real(job.signal.as_real().expect("checked real"), job.geom.input_window(s), &mut w.seg);
            job.fft
                .rfft_with_scratch(&w.seg, &mut w.bins, &mut w.pong)
                .expect("segment buffers match the plan");
            for (dst, filter) in chunk.chunks_mut(nb).zip(&job.spectra.bins) {
                for ((p, a), b) in dst.iter_mut().zip(&w.bins).zip(filter) {
                    *p = a * b;
                }
            }
        });
        let products = &products;
        self.dispatch(&job.geom, real_rows(out), || R2rScratch::new(n), |w, s, windows| {
            for (f, dst) in windows.iter_mut().enumerate() {
                let start = (s * nfil + f) * nb;
                job.fft
                    .irfft_with_scratch(&products[start..start + nb], &mut w.time, &mut w.pong)
                    .expect("segment buffers match the plan");
                job.store_real(s, &w.time, dst);
            }
        });
    }
}

/// Everything a segment worker reads; shared by reference across workers.
struct Job<'a, T> {
    signal: &'a Samples<T>,
    spectra: &'a FilterSpectra<T>,
    geom: Geometry,
    fft: &'a FftPlan<T>,
    postproc: &'a PostProc,
}

impl<T: Real> Job<'_, T> {
    fn fused_c2c_segment<S>(
        &self,
        w: &mut C2cScratch<T>,
        s: usize,
        windows: &mut [&mut [S]],
        write: impl Fn(&[Complex<T>], Window, &mut [S]),
    ) {
        load_complex(self.signal, self.geom.input_window(s), &mut w.seg);
        self.fft
            .forward_native(&mut w.seg, &mut w.pong)
            .expect("segment buffers match the plan");
        for (f, dst) in windows.iter_mut().enumerate() {
            let filter = &self.spectra.bins[f];
            for ((p, a), b) in w.work.iter_mut().zip(&w.seg).zip(filter) {
                *p = a * b;
            }
            self.fft
                .inverse_native(&mut w.work, &mut w.pong)
                .expect("segment buffers match the plan");
            self.store(s, &w.work, dst, &write);
        }
    }

    /// Discards the `M - 1` aliased samples and hands the rest to the
    /// post-processing writer.
    fn store<V, S>(&self, s: usize, segment: &[V], dst: &mut [S], write: impl Fn(&[V], Window, &mut [S])) {
        let window = Window {
            start: s * self.geom.stride,
            len: dst.len(),
            halo: self.geom.halo,
            signal_len: self.geom.signal_len,
        };
        write(&segment[self.geom.filter_len - 1..], window, dst);
    }

    fn store_real(&self, s: usize, segment: &[T], dst: &mut [T]) {
        match self.postproc {
            PostProc::MagnitudeSquared => {
                self.store(s, segment, dst, |v, win, o| postproc::magnitude_squared_into(v, win, o))
            }
            spec => self.store(s, segment, dst, |v, win, o| postproc::apply_into(v, spec, win, o)),
        }
    }
}

struct C2cScratch<T> {
    seg: Vec<Complex<T>>,
    work: Vec<Complex<T>>,
    pong: Vec<Complex<T>>,
}

impl<T: Real> C2cScratch<T> {
    fn new(n: usize) -> Self {
        C2cScratch {
            seg: vec![Complex::default(); n],
            work: vec![Complex::default(); n],
            pong: vec![Complex::default(); n],
        }
    }
}

/// Real-path scratch. Time-domain buffers are real scalars only.
struct R2rScratch<T> {
    seg: Vec<T>,
    time: Vec<T>,
    bins: Vec<Complex<T>>,
    work: Vec<Complex<T>>,
    pong: Vec<Complex<T>>,
}

impl<T: Real> R2rScratch<T> {
    fn new(n: usize) -> Self {
        R2rScratch {
            seg: vec![T::zero(); n],
            time: vec![T::zero(); n],
            bins: vec![Complex::default(); n / 2 + 1],
            work: vec![Complex::default(); n / 2 + 1],
            pong: vec![Complex::default(); n],
        }
    }
}

fn output_kind(mode: Mode, postproc: &PostProc) -> ValueKind {
    match mode {
        Mode::R2r => ValueKind::Real,
        Mode::C2c if postproc.output_is_real() => ValueKind::Real,
        Mode::C2c => ValueKind::Complex,
    }
}

fn check_plan<T: Real>(signal: &Signal<T>, filters: &FilterSet<T>, plan: &SegmentPlan) -> Result<()> {
    if signal.len() != plan.signal_len() {
        return Err(Error::PlanMismatch(format!(
            "signal has {} samples, plan expects {}",
            signal.len(),
            plan.signal_len()
        )));
    }
    if filters.tap_length() != plan.filter_len() || filters.origin() != plan.origin() {
        return Err(Error::PlanMismatch(format!(
            "filters (M={}, origin={}) do not match plan (M={}, origin={})",
            filters.tap_length(),
            filters.origin(),
            plan.filter_len(),
            plan.origin()
        )));
    }
    if plan.mode() == Mode::R2r
        && (signal.value_kind() != ValueKind::Real || filters.value_kind() != ValueKind::Real)
    {
        return Err(Error::KindMismatch("real-to-real mode needs a real signal and real filters"));
    }
    Ok(())
}

fn copy_rows<T: Real>(rows: Vec<Samples<T>>, spec: &PostProc, kind: ValueKind, out: &mut [Samples<T>]) -> Result<()> {
    for (src, dst) in rows.into_iter().zip(out.iter_mut()) {
        let processed = postproc::apply_global(&src, spec)?;
        *dst = match (kind, processed) {
            (ValueKind::Complex, Samples::Real(v)) => {
                Samples::Complex(v.into_iter().map(|x| Complex::new(x, T::zero())).collect())
            }
            (ValueKind::Real, Samples::Complex(_)) => {
                return Err(Error::KindMismatch("complex result where a real output was requested"))
            }
            (_, s) => s,
        };
    }
    Ok(())
}

fn real_rows<T: Real>(out: &mut [Samples<T>]) -> Vec<&mut [T]> {
    out.iter_mut()
        .map(|r| match r {
            Samples::Real(v) => v.as_mut_slice(),
            Samples::Complex(_) => unreachable!("row kinds checked before dispatch"),
        })
        .collect()
}

fn complex_rows<T: Real>(out: &mut [Samples<T>]) -> Vec<&mut [Complex<T>]> {
    out.iter_mut()
        .map(|r| match r {
            Samples::Complex(v) => v.as_mut_slice(),
            Samples::Real(_) => unreachable!("row kinds checked before dispatch"),
        })
        .collect()
}

/// Overlap of `window` with `0..len`, as (source range, destination offset).
fn overlap(window: &Range<isize>, len: usize) -> Option<(Range<usize>, usize)> {
    let lo = window.start.max(0);
    let hi = window.end.min(len as isize);
    (lo < hi).then(|| (lo as usize..hi as usize, (lo - window.start) as usize))
}

fn load_complex<T: Real>(src: &Samples<T>, window: Range<isize>, dst: &mut [Complex<T>]) {
    dst.fill(Complex::default());
    if let Some((range, at)) = overlap(&window, src.len()) {
        let dst = &mut dst[at..at + range.len()];
        match src {
            Samples::Complex(v) => dst.copy_from_slice(&v[range]),
            Samples::Real(v) => {
                for (d, &x) in dst.iter_mut().zip(&v[range]) {
                    *d = Complex::new(x, T::zero());
                }
            }
        }
    }
}

fn load_real<T: Real>(src: &[T], window: Range<isize>, dst: &mut [T]) {
    dst.fill(T::zero());
    if let Some((range, at)) = overlap(&window, src.len()) {
        dst[at..at + range.len()].copy_from_slice(&src[range]);
    }
}
