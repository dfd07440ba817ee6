//! Overlap-and-save fast convolution of long 1-D signals against banks of
//! short FIR filters.
//!
//! The engine cuts the signal into overlapping segments, transforms each
//! segment once, multiplies it with every cached filter spectrum, transforms
//! back and keeps only the unaliased part. Complex data goes through a
//! radix-2 Cooley-Tukey kernel that never reorders its output; real data goes
//! through a Stockham transform of half the segment length with even/odd
//! packing. Every path is checked against direct time-domain convolution.
//!
//! ```
//! use olsconv::{Engine, EngineVariant, FilterSet, Mode, PostProc, SegmentPlan, SegmentSize, Signal};
//! use olsconv::ols::transform_filters;
//!
//! let signal = Signal::real(vec![1.0f32, 2.0, 3.0, 4.0]).unwrap();
//! let filters = FilterSet::real(vec![vec![1.0, 1.0]], 0).unwrap();
//! let plan = SegmentPlan::new(signal.len(), 2, Mode::R2r, 0, SegmentSize::Fixed(8)).unwrap();
//! let filters = transform_filters(&filters, &plan, plan.layout()).unwrap();
//! let out = Engine::serial()
//!     .convolve(&signal, &filters, &plan, EngineVariant::Fused, &PostProc::None)
//!     .unwrap();
//! let y = out[0].as_real().unwrap();
//! assert!((y[3] - 7.0).abs() < 1e-5);
//! ```

pub mod bench;
pub mod cli;
pub mod error;
pub mod fft;
pub mod io;
pub mod ols;
pub mod oracle;
pub mod postproc;
pub mod synth;
pub mod types;
pub mod verify;

pub use error::{Error, Result};
pub use ols::{Engine, EngineConfig, EngineVariant, Mode, SegmentPlan, SegmentSize};
pub use postproc::PostProc;
pub use types::{ComplexSample, Domain, FilterSet, Precision, Real, Samples, Signal, ValueKind};
