//! Throughput sweeps.
//!
//! A [`SweepConfig`] lists values for every axis; [`run_sweep`] times each
//! combination and yields one [`BenchRecord`] per combination and variant.
//! Only the convolution call is timed: input generation and filter
//! transforms happen before the clock starts.

use std::io::{Read, Write};
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ols::{self, full_fft_len, prepare_filters, Engine, EngineConfig, EngineVariant, Mode, SegmentPlan, SegmentSize};
use crate::postproc::PostProc;
use crate::synth;
use crate::types::{Precision, Real, ValueKind};

pub const CSV_HEADER: &str = "variant,mode,ns,m,nfil,n,postproc,precision,workers,wall_time_s,elements_per_s";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub variant: EngineVariant,
    pub mode: Mode,
    pub ns: usize,
    pub m: usize,
    pub nfil: usize,
    /// Segment length; the padded length for the full-FFT baseline, 0 for
    /// the direct oracle.
    pub n: usize,
    pub postproc: PostProc,
    pub precision: Precision,
    pub workers: usize,
    /// Median over the timed repeats.
    pub wall_time_s: f64,
    /// Useful output samples (`ns * nfil`) per second.
    pub elements_per_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_variants")]
    pub variants: Vec<EngineVariant>,
    #[serde(default = "default_modes")]
    pub modes: Vec<Mode>,
    pub ns: Vec<usize>,
    pub m: Vec<usize>,
    pub nfil: Vec<usize>,
    #[serde(default = "default_n")]
    pub n: Vec<SegmentSize>,
    #[serde(default = "default_postproc")]
    pub postproc: Vec<PostProc>,
    #[serde(default = "default_precision")]
    pub precision: Vec<Precision>,
    #[serde(default = "default_workers")]
    pub workers: Vec<usize>,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default = "default_warmup")]
    pub warmup: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_variants() -> Vec<EngineVariant> {
    vec![EngineVariant::Fused]
}
fn default_modes() -> Vec<Mode> {
    vec![Mode::R2r]
}
fn default_n() -> Vec<SegmentSize> {
    vec![SegmentSize::Auto]
}
fn default_postproc() -> Vec<PostProc> {
    vec![PostProc::None]
}
fn default_precision() -> Vec<Precision> {
    vec![Precision::Single]
}
fn default_workers() -> Vec<usize> {
    vec![1]
}
fn default_repeats() -> usize {
    5
}
fn default_warmup() -> usize {
    2
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: SweepConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if config.repeats == 0 {
            return Err(Error::Parse("repeats must be at least 1".into()));
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text).map_err(|e| Error::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}

/// A combination the sweep did not run.
#[derive(Debug, Clone, PartialEq)]
pub struct Skipped {
    pub description: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepOutcome {
    pub records: Vec<BenchRecord>,
    pub skipped: Vec<Skipped>,
}

/// Runs every combination in a fixed nesting order: precision, workers,
/// mode, ns, m, nfil, n, postproc, variant. Variants that do not segment
/// run once per combination of the other axes, on the first `n` value.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutcome> {
    let mut outcome = SweepOutcome::default();
    for &precision in &config.precision {
        for &workers in &config.workers {
            let engine = Engine::new(EngineConfig {
                workers,
                ..EngineConfig::default()
            })?;
            match precision {
                Precision::Single => sweep_precision::<f32>(config, &engine, &mut outcome)?,
                Precision::Double => sweep_precision::<f64>(config, &engine, &mut outcome)?,
            }
        }
    }
    Ok(outcome)
}

fn sweep_precision<T: Real>(config: &SweepConfig, engine: &Engine, outcome: &mut SweepOutcome) -> Result<()> {
    for &mode in &config.modes {
        let kind = match mode {
            Mode::C2c => ValueKind::Complex,
            Mode::R2r => ValueKind::Real,
        };
        for &ns in &config.ns {
            if ns == 0 {
                outcome.skipped.push(Skipped {
                    description: format!("mode={mode} ns=0"),
                    reason: "empty signal".into(),
                });
                continue;
            }
            let signal = synth::random_signal::<T>(ns, kind, config.seed)?;
            for &m in &config.m {
                for &nfil in &config.nfil {
                    if m == 0 || nfil == 0 {
                        outcome.skipped.push(Skipped {
                            description: format!("mode={mode} ns={ns} m={m} nfil={nfil}"),
                            reason: "empty filter bank".into(),
                        });
                        continue;
                    }
                    let filters = synth::random_filters::<T>(nfil, m, ValueKind::Real, 0, config.seed ^ 1)?;
                    for (n_index, &size) in config.n.iter().enumerate() {
                        for &postproc in &config.postproc {
                            for &variant in &config.variants {
                                let segmented = matches!(variant, EngineVariant::Fused | EngineVariant::Pipelined);
                                if !segmented && n_index > 0 {
                                    continue;
                                }
                                let description = format!(
                                    "variant={variant} mode={mode} ns={ns} m={m} nfil={nfil} n={size} postproc={postproc} precision={} workers={}",
                                    T::PRECISION,
                                    engine.workers()
                                );
                                match time_case(engine, &signal, &filters, variant, mode, size, &postproc, config) {
                                    Ok((n, wall)) => outcome.records.push(BenchRecord {
                                        variant,
                                        mode,
                                        ns,
                                        m,
                                        nfil,
                                        n,
                                        postproc,
                                        precision: T::PRECISION,
                                        workers: engine.workers(),
                                        wall_time_s: wall,
                                        elements_per_s: (ns * nfil) as f64 / wall,
                                    }),
                                    Err(e) => outcome.skipped.push(Skipped {
                                        description,
                                        reason: e.to_string(),
                                    }),
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn time_case<T: Real>(
    engine: &Engine,
    signal: &crate::types::Signal<T>,
    filters: &crate::types::FilterSet<T>,
    variant: EngineVariant,
    mode: Mode,
    size: SegmentSize,
    postproc: &PostProc,
    config: &SweepConfig,
) -> Result<(usize, f64)> {
    let (ns, m) = (signal.len(), filters.tap_length());
    let plan = SegmentPlan::for_variant(variant, ns, m, mode, 0, size)?;
    let n = match variant {
        EngineVariant::Fused | EngineVariant::Pipelined => {
            plan.geometry(postproc.halo())?;
            plan.fft_len()
        }
        EngineVariant::FullFftBaseline => full_fft_len(ns, m),
        EngineVariant::DirectOracle => 0,
    };
    let prepared = prepare_filters(filters, &plan, variant)?;
    let mut times = Vec::with_capacity(config.repeats);
    for i in 0..config.warmup + config.repeats {
        let start = Instant::now();
        let out = engine.convolve(signal, &prepared, &plan, variant, postproc)?;
        let elapsed = start.elapsed().as_secs_f64();
        drop(out);
        if i >= config.warmup {
            times.push(elapsed.max(f64::MIN_POSITIVE));
        }
    }
    Ok((n, ols::median(&mut times)))
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    let io = |e: csv::Error| Error::Parse(format!("csv: {e}"));
    writer.write_record(CSV_HEADER.split(',')).map_err(io)?;
    for record in records {
        writer.serialize(record).map_err(io)?;
    }
    writer.flush().map_err(|e| Error::Parse(format!("csv: {e}")))
}

/// Parses CSV produced by [`write_csv`]. The header must match exactly.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<BenchRecord>> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers().map_err(|e| Error::Parse(format!("csv: {e}")))?;
    if header.iter().collect::<Vec<_>>().join(",") != CSV_HEADER {
        return Err(Error::Parse(format!("unexpected csv header `{}`", header.iter().collect::<Vec<_>>().join(","))));
    }
    reader
        .deserialize()
        .map(|r| r.map_err(|e| Error::Parse(format!("csv: {e}"))))
        .collect()
}
