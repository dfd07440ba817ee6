use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input sequence is empty")]
    EmptyInput,

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("filters have differing tap lengths ({expected} vs {found})")]
    RaggedFilters { expected: usize, found: usize },

    #[error("filter origin {origin} out of range for tap length {taps}")]
    BadOrigin { origin: usize, taps: usize },

    #[error("value kinds are incompatible: {0}")]
    KindMismatch(&'static str),

    #[error("operation requires a time-domain signal")]
    DomainMismatch,

    #[error("bad transform length {len}: {reason}")]
    BadLength { len: usize, reason: &'static str },

    #[error("plan variant {found:?} cannot run this transform (needs {expected:?})")]
    VariantMismatch {
        expected: crate::fft::FftVariant,
        found: crate::fft::FftVariant,
    },

    #[error("edge bins of a real spectrum must be real (imaginary part {imag:e})")]
    BadSpectrum { imag: f64 },

    #[error("filter length {taps} exceeds the maximum segment length {max}; use the full-FFT baseline")]
    FilterTooLong { taps: usize, max: usize },

    #[error("segment length {fft_len} is shorter than the filter length {taps}")]
    SegmentTooSmall { fft_len: usize, taps: usize },

    #[error("plan mismatch: {0}")]
    PlanMismatch(String),

    #[error("filter spectra use layout {found:?}, engine expects {expected:?}")]
    LayoutMismatch {
        expected: crate::fft::SpectrumLayout,
        found: crate::fft::SpectrumLayout,
    },

    #[error("filter spectra have not been computed for this plan")]
    MissingSpectra,

    #[error("padded transform length {len} exceeds the buffer budget {budget}")]
    TooLarge { len: usize, budget: usize },

    #[error("post-processing needs a halo of {needed} sample(s) but the segment only provides {available} valid sample(s)")]
    HaloUnavailable { needed: usize, available: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("invalid value: {0}")]
    Parse(String),

    #[error("thread pool: {0}")]
    ThreadPool(String),
}
