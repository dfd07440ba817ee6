//! Overlap-and-save planning and engines.
//!
//! A signal of `N_s` samples is cut into segments of `N` samples that overlap
//! their predecessor by `M - 1`. After a circular convolution of length `N`
//! the first `M - 1` samples of each segment are aliased and discarded; the
//! remaining `L = N - M + 1` land in a window of the output that no other
//! segment touches.

mod baseline;
mod engine;
mod spectra;
mod tune;

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{SpectrumLayout, DEFAULT_MAX_FFT_LEN};

pub use baseline::{full_fft_len, DEFAULT_MAX_BUFFER_LEN};
pub use engine::{Engine, EngineConfig};
pub use spectra::{prepare_filters, transform_filters};
pub(crate) use tune::median;
pub use tune::{autotune_segment_size, TuneOptions, TuneReport};

/// Segment length used by the pipelined engine when none is requested.
pub const PIPELINED_DEFAULT_FFT_LEN: usize = 8192;

/// Upper bound on segment length for the pipelined engine.
pub const PIPELINED_MAX_FFT_LEN: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Complex segments through the reorder-free Cooley-Tukey kernels.
    C2c,
    /// Real segments through half-length packed transforms.
    R2r,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Mode::C2c => "c2c",
            Mode::R2r => "r2r",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "c2c" => Ok(Mode::C2c),
            "r2r" => Ok(Mode::R2r),
            other => Err(Error::Parse(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineVariant {
    /// One pass per segment: forward transform once, then multiply, inverse,
    /// post-process and store for every filter while the spectrum is hot.
    Fused,
    /// Whole-signal passes with materialised segment spectra.
    Pipelined,
    /// One long transform of the zero-padded signal, no segmentation.
    FullFftBaseline,
    /// Time-domain evaluation.
    DirectOracle,
}

impl EngineVariant {
    pub const ALL: [EngineVariant; 4] = [
        EngineVariant::Fused,
        EngineVariant::Pipelined,
        EngineVariant::FullFftBaseline,
        EngineVariant::DirectOracle,
    ];
}

impl fmt::Display for EngineVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            EngineVariant::Fused => "fused",
            EngineVariant::Pipelined => "pipelined",
            EngineVariant::FullFftBaseline => "full_fft_baseline",
            EngineVariant::DirectOracle => "direct_oracle",
        })
    }
}

impl FromStr for EngineVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fused" => Ok(EngineVariant::Fused),
            "pipelined" => Ok(EngineVariant::Pipelined),
            "full_fft_baseline" | "full_fft" => Ok(EngineVariant::FullFftBaseline),
            "direct_oracle" | "direct" => Ok(EngineVariant::DirectOracle),
            other => Err(Error::Parse(format!("unknown engine variant `{other}`"))),
        }
    }
}

/// Requested segment length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SegmentSize {
    #[default]
    Auto,
    Fixed(usize),
}

impl Serialize for SegmentSize {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SegmentSize::Auto => s.serialize_str("auto"),
            SegmentSize::Fixed(n) => s.serialize_u64(*n as u64),
        }
    }
}

impl<'de> Deserialize<'de> for SegmentSize {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(usize),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(SegmentSize::Fixed(n)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl fmt::Display for SegmentSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SegmentSize::Auto => f.write_str("auto"),
            SegmentSize::Fixed(n) => write!(f, "{n}"),
        }
    }
}

impl FromStr for SegmentSize {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(SegmentSize::Auto);
        }
        s.parse()
            .map(SegmentSize::Fixed)
            .map_err(|_| Error::Parse(format!("segment length must be an integer or `auto`, got `{s}`")))
    }
}

/// Segment length used when no tuning run is available: the smallest power
/// of two of at least `4 (M - 1)`, clamped to `[64, max_fft_len]`.
pub fn default_segment_len(filter_len: usize, max_fft_len: usize) -> usize {
    (4 * filter_len.saturating_sub(1))
        .next_power_of_two()
        .clamp(64.min(max_fft_len), max_fft_len)
}

/// Overlap-and-save geometry for one signal length and filter length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SegmentPlan {
    fft_len: usize,
    filter_len: usize,
    valid_len: usize,
    segments: usize,
    signal_len: usize,
    mode: Mode,
    origin: usize,
    layout: SpectrumLayout,
    max_fft_len: usize,
}

impl SegmentPlan {
    pub fn new(signal_len: usize, filter_len: usize, mode: Mode, origin: usize, size: SegmentSize) -> Result<Self> {
        Self::with_max_fft_len(signal_len, filter_len, mode, origin, size, DEFAULT_MAX_FFT_LEN)
    }

    pub fn with_max_fft_len(
        signal_len: usize,
        filter_len: usize,
        mode: Mode,
        origin: usize,
        size: SegmentSize,
        max_fft_len: usize,
    ) -> Result<Self> {
        if signal_len == 0 || filter_len == 0 {
            return Err(Error::EmptyInput);
        }
        if !max_fft_len.is_power_of_two() || max_fft_len < 8 {
            return Err(Error::BadLength {
                len: max_fft_len,
                reason: "maximum segment length must be a power of two of at least 8",
            });
        }
        if origin >= filter_len {
            return Err(Error::BadOrigin {
                origin,
                taps: filter_len,
            });
        }
        if filter_len > max_fft_len {
            return Err(Error::FilterTooLong {
                taps: filter_len,
                max: max_fft_len,
            });
        }
        let fft_len = match size {
            SegmentSize::Auto => default_segment_len(filter_len, max_fft_len),
            SegmentSize::Fixed(n) => n,
        };
        if !fft_len.is_power_of_two() || fft_len < 4 || fft_len > max_fft_len {
            return Err(Error::BadLength {
                len: fft_len,
                reason: "segment length must be a power of two in [4, max]",
            });
        }
        if fft_len < filter_len {
            return Err(Error::SegmentTooSmall {
                fft_len,
                taps: filter_len,
            });
        }
        if mode == Mode::R2r && fft_len < 8 {
            return Err(Error::BadLength {
                len: fft_len,
                reason: "real segments need at least 8 samples",
            });
        }
        let valid_len = fft_len - filter_len + 1;
        Ok(SegmentPlan {
            fft_len,
            filter_len,
            valid_len,
            segments: signal_len.div_ceil(valid_len),
            signal_len,
            mode,
            origin,
            layout: match mode {
                Mode::C2c => SpectrumLayout::BitReversed,
                Mode::R2r => SpectrumLayout::HalfPacked,
            },
            max_fft_len,
        })
    }

    /// Segment geometry for the pipelined engine: an explicit length, or
    /// [`PIPELINED_DEFAULT_FFT_LEN`] grown as needed to fit the filter.
    pub fn pipelined(signal_len: usize, filter_len: usize, mode: Mode, origin: usize, size: SegmentSize) -> Result<Self> {
        let size = match size {
            SegmentSize::Auto => SegmentSize::Fixed(PIPELINED_DEFAULT_FFT_LEN.max(filter_len.next_power_of_two())),
            fixed => fixed,
        };
        Self::with_max_fft_len(signal_len, filter_len, mode, origin, size, PIPELINED_MAX_FFT_LEN)
    }

    /// Geometry a given engine variant runs with. Fused segments use the
    /// default limits; every other variant uses the pipelined limits, which
    /// only matter to the segmented engines.
    pub fn for_variant(
        variant: EngineVariant,
        signal_len: usize,
        filter_len: usize,
        mode: Mode,
        origin: usize,
        size: SegmentSize,
    ) -> Result<Self> {
        match variant {
            EngineVariant::Fused => Self::new(signal_len, filter_len, mode, origin, size),
            _ => Self::pipelined(signal_len, filter_len, mode, origin, size),
        }
    }

    /// Selects the complex-path spectrum layout. Complex segments accept
    /// `BitReversed` (default) or `Natural`; real segments only `HalfPacked`.
    pub fn with_layout(mut self, layout: SpectrumLayout) -> Result<Self> {
        let ok = matches!(
            (self.mode, layout),
            (Mode::C2c, SpectrumLayout::BitReversed | SpectrumLayout::Natural) | (Mode::R2r, SpectrumLayout::HalfPacked)
        );
        if !ok {
            return Err(Error::LayoutMismatch {
                expected: self.layout,
                found: layout,
            });
        }
        self.layout = layout;
        Ok(self)
    }

    pub fn fft_len(&self) -> usize {
        self.fft_len
    }
    pub fn filter_len(&self) -> usize {
        self.filter_len
    }
    /// `L = N - M + 1`.
    pub fn valid_len(&self) -> usize {
        self.valid_len
    }
    pub fn segment_count(&self) -> usize {
        self.segments
    }
    pub fn signal_len(&self) -> usize {
        self.signal_len
    }
    pub fn mode(&self) -> Mode {
        self.mode
    }
    pub fn origin(&self) -> usize {
        self.origin
    }
    pub fn layout(&self) -> SpectrumLayout {
        self.layout
    }
    pub fn max_fft_len(&self) -> usize {
        self.max_fft_len
    }
    /// Aliased samples discarded per segment.
    pub fn discarded(&self) -> usize {
        self.filter_len - 1
    }

    /// Input window of segment `s` (may extend past either end of the signal;
    /// those samples read as zero).
    pub fn input_window(&self, s: usize) -> Range<isize> {
        self.geometry(0).expect("zero halo always fits").input_window(s)
    }

    /// Output window of segment `s`.
    pub fn output_window(&self, s: usize) -> Range<usize> {
        let start = s * self.valid_len;
        start..(start + self.valid_len).min(self.signal_len)
    }

    /// Segmentation when each segment must also produce `halo` correct
    /// neighbours on both sides of its output span.
    pub fn geometry(&self, halo: usize) -> Result<Geometry> {
        if self.valid_len < 2 * halo + 1 {
            return Err(Error::HaloUnavailable {
                needed: halo,
                available: self.valid_len,
            });
        }
        let stride = self.valid_len - 2 * halo;
        Ok(Geometry {
            fft_len: self.fft_len,
            filter_len: self.filter_len,
            origin: self.origin,
            signal_len: self.signal_len,
            halo,
            stride,
            segments: self.signal_len.div_ceil(stride),
        })
    }
}

/// Segment layout actually executed by an engine: the plan's geometry with
/// each output span shrunk by the post-processing halo.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Geometry {
    pub fft_len: usize,
    pub filter_len: usize,
    pub origin: usize,
    pub signal_len: usize,
    pub halo: usize,
    /// Output samples written per segment (the last one may write fewer).
    pub stride: usize,
    pub segments: usize,
}

impl Geometry {
    /// Global output index of the first correct sample the segment holds
    /// (halo included).
    fn first_value(&self, s: usize) -> isize {
        (s * self.stride) as isize - self.halo as isize
    }

    pub fn input_window(&self, s: usize) -> Range<isize> {
        let start = self.first_value(s) + self.origin as isize - (self.filter_len as isize - 1);
        start..start + self.fft_len as isize
    }

    pub fn output_window(&self, s: usize) -> Range<usize> {
        let start = s * self.stride;
        start..(start + self.stride).min(self.signal_len)
    }
}
