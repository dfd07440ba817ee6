//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::bench::{self, SweepConfig};
use crate::error::{Error, Result};
use crate::io::{self as files, Format};
use crate::ols::{autotune_segment_size, prepare_filters, Engine, EngineConfig, EngineVariant, Mode, SegmentPlan, SegmentSize, TuneOptions};
use crate::postproc::PostProc;
use crate::synth;
use crate::types::{FilterSet, Precision, Real, Signal, ValueKind};
use crate::verify::{run_verify, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "olsconv", version, about = "Overlap-and-save FIR filter-bank convolution")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convolve a signal with a filter bank and write one output record per filter.
    Convolve(ConvolveArgs),
    /// Compare the engine against direct convolution over a grid of shapes.
    Verify(VerifyArgs),
    /// Run a benchmark sweep described by a TOML file and emit CSV.
    Bench(BenchArgs),
    /// Time candidate segment lengths and report the fastest per filter length.
    Tune(TuneArgs),
}

#[derive(Debug, Args)]
pub struct EngineArgs {
    /// Worker threads; 0 uses every available core.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, default_value_t = Precision::Single)]
    pub precision: Precision,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ConvolveArgs {
    /// Signal file (binary OLS1 or text). Omit to generate noise.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    /// Length of the generated noise signal when no input file is given.
    #[arg(long, default_value_t = 100_000)]
    pub signal_len: usize,
    /// Filter file, one record per filter. Omit to generate random filters.
    #[arg(long)]
    pub filter_file: Option<PathBuf>,
    /// Number of generated filters.
    #[arg(long, default_value_t = 1)]
    pub filters: usize,
    /// Taps per generated filter.
    #[arg(long, default_value_t = 64)]
    pub filter_len: usize,
    /// Output file; `.txt` selects the text format.
    #[arg(long, short)]
    pub output: PathBuf,
    /// `c2c` or `r2r`; inferred from the data when omitted.
    #[arg(long)]
    pub mode: Option<Mode>,
    #[arg(long, default_value_t = SegmentSize::Auto)]
    pub fft_len: SegmentSize,
    /// Filter tap aligned with output index 0.
    #[arg(long, default_value_t = 0)]
    pub origin: usize,
    #[arg(long, default_value_t = EngineVariant::Fused)]
    pub variant: EngineVariant,
    #[arg(long, default_value_t = PostProc::None)]
    pub postproc: PostProc,
    #[command(flatten)]
    pub engine: EngineArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Restrict to one mode; both by default.
    #[arg(long)]
    pub mode: Option<Mode>,
    #[arg(long, value_delimiter = ',', default_values_t = [1_000usize, 100_000])]
    pub signal_len: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [3usize, 64, 257, 1025])]
    pub filter_len: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 8])]
    pub filters: Vec<usize>,
    #[arg(long, default_value_t = SegmentSize::Auto)]
    pub fft_len: SegmentSize,
    #[arg(long, default_value_t = 0)]
    pub origin: usize,
    #[arg(long, default_value_t = EngineVariant::Fused)]
    pub variant: EngineVariant,
    #[arg(long, default_value_t = PostProc::None)]
    pub postproc: PostProc,
    /// Test hook: perturb one output sample so the first case must fail.
    #[arg(long, hide = true)]
    pub corrupt: bool,
    #[command(flatten)]
    pub engine: EngineArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Sweep description in TOML.
    pub config: PathBuf,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [17usize, 65, 257, 1025])]
    pub filter_len: Vec<usize>,
    #[arg(long, default_value_t = Mode::R2r)]
    pub mode: Mode,
    /// Candidate segment lengths.
    #[arg(long, value_delimiter = ',', default_values_t = [256usize, 512, 1024, 2048, 4096])]
    pub candidates: Vec<usize>,
    #[arg(long, default_value_t = 1 << 18)]
    pub probe_len: usize,
    #[arg(long, default_value_t = 1)]
    pub filters: usize,
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    #[command(flatten)]
    pub engine: EngineArgs,
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let stdout = io::stdout();
    match execute(cli, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

/// Runs a parsed command, writing reports to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Convolve(args) => {
            match args.engine.precision {
                Precision::Single => convolve::<f32>(&args)?,
                Precision::Double => convolve::<f64>(&args)?,
            }
            Ok(EXIT_OK)
        }
        Command::Verify(args) => verify(&args, out),
        Command::Bench(args) => bench(&args).map(|_| EXIT_OK),
        Command::Tune(args) => {
            match args.engine.precision {
                Precision::Single => tune::<f32>(&args, out)?,
                Precision::Double => tune::<f64>(&args, out)?,
            }
            Ok(EXIT_OK)
        }
    }
}

fn engine(args: &EngineArgs) -> Result<Engine> {
    Engine::new(EngineConfig {
        workers: args.workers,
        ..EngineConfig::default()
    })
}

fn report_io(e: io::Error) -> Error {
    Error::Parse(format!("writing report: {e}"))
}

fn convolve<T: Real>(args: &ConvolveArgs) -> Result<()> {
    let signal: Signal<T> = match &args.input {
        Some(path) => {
            let records = files::read_records(path)?;
            if records.len() != 1 {
                return Err(Error::Format {
                    path: path.clone(),
                    message: format!("a signal file holds one record, found {}", records.len()),
                });
            }
            Signal::new(records[0].to_precision())?
        }
        None => {
            let kind = match args.mode {
                Some(Mode::C2c) => ValueKind::Complex,
                _ => ValueKind::Real,
            };
            synth::random_signal(args.signal_len, kind, args.engine.seed)?
        }
    };
    let filters: FilterSet<T> = match &args.filter_file {
        Some(path) => FilterSet::new(
            files::read_records(path)?.iter().map(|r| r.to_precision()).collect(),
            args.origin,
        )?,
        None => synth::random_filters(args.filters, args.filter_len, ValueKind::Real, args.origin, args.engine.seed ^ 1)?,
    };
    let mode = args.mode.unwrap_or(
        if signal.value_kind() == ValueKind::Real && filters.value_kind() == ValueKind::Real {
            Mode::R2r
        } else {
            Mode::C2c
        },
    );
    let plan = SegmentPlan::for_variant(args.variant, signal.len(), filters.tap_length(), mode, args.origin, args.fft_len)?;
    let prepared = prepare_filters(&filters, &plan, args.variant)?;
    let outputs = engine(&args.engine)?.convolve(&signal, &prepared, &plan, args.variant, &args.postproc)?;
    files::write_records(&args.output, &outputs, Format::for_path(&args.output))
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let options = VerifyOptions {
        ns: args.signal_len.clone(),
        m: args.filter_len.clone(),
        nfil: args.filters.clone(),
        modes: match args.mode {
            Some(mode) => vec![mode],
            None => vec![Mode::C2c, Mode::R2r],
        },
        fft_len: args.fft_len,
        origin: args.origin,
        variant: args.variant,
        postproc: args.postproc,
        precision: args.engine.precision,
        seed: args.engine.seed,
        corrupt: args.corrupt,
    };
    writeln!(
        out,
        "# variant={} precision={} postproc={} origin={} seed={}",
        options.variant, options.precision, options.postproc, options.origin, options.seed
    )
    .map_err(report_io)?;
    let report = run_verify(&engine(&args.engine)?, &options)?;
    for case in &report.cases {
        writeln!(out, "{case}").map_err(report_io)?;
    }
    let failed = report.cases.iter().filter(|c| !c.passed()).count();
    writeln!(out, "{} cases, {} failed", report.cases.len(), failed).map_err(report_io)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn bench(args: &BenchArgs) -> Result<()> {
    let config = SweepConfig::load(&args.config)?;
    let outcome = bench::run_sweep(&config)?;
    for skipped in &outcome.skipped {
        eprintln!("skipped {}: {}", skipped.description, skipped.reason);
    }
    match &args.csv {
        Some(path) => {
            let file = File::create(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            bench::write_csv(&outcome.records, file)
        }
        None => bench::write_csv(&outcome.records, io::stdout().lock()),
    }
}

fn tune<T: Real>(args: &TuneArgs, out: &mut dyn Write) -> Result<()> {
    let engine = engine(&args.engine)?;
    let options = TuneOptions {
        probe_len: args.probe_len,
        filters: args.filters,
        repeats: args.repeats,
        seed: args.engine.seed,
    };
    writeln!(
        out,
        "# mode={} precision={} probe_len={} filters={} repeats={} candidates={:?}",
        args.mode,
        T::PRECISION,
        options.probe_len,
        options.filters,
        options.repeats,
        args.candidates
    )
    .map_err(report_io)?;
    for &m in &args.filter_len {
        let report = autotune_segment_size::<T>(&engine, m, args.mode, &args.candidates, &options)?;
        let timings: Vec<String> = report.timings.iter().map(|(n, t)| format!("{n}:{t:.4e}")).collect();
        writeln!(out, "m={m} chosen={} times_s=[{}]", report.chosen, timings.join(" ")).map_err(report_io)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_parse() {
        let cli = Cli::try_parse_from([
            "olsconv", "convolve", "-o", "out.bin", "--mode", "r2r", "--fft-len", "1024", "--filters", "8",
            "--precision", "double", "--postproc", "scale:0.5", "--variant", "pipelined",
        ])
        .unwrap();
        let Command::Convolve(args) = cli.command else { panic!() };
        assert_eq!(args.mode, Some(Mode::R2r));
        assert_eq!(args.fft_len, SegmentSize::Fixed(1024));
        assert_eq!(args.filters, 8);
        assert_eq!(args.engine.precision, Precision::Double);
        assert_eq!(args.postproc, PostProc::Scale(0.5));
        assert_eq!(args.variant, EngineVariant::Pipelined);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["olsconv", "convolve", "--mode", "xyz", "-o", "a"]), EXIT_USAGE);
        assert_eq!(run(["olsconv"]), EXIT_USAGE);
        assert_eq!(run(["olsconv", "--help"]), EXIT_OK);
    }

    #[test]
    fn verify_small_grid() {
        let cli = Cli::try_parse_from(["olsconv", "verify", "--signal-len", "300", "--filter-len", "3,17", "--filters", "2"]).unwrap();
        let mut out = Vec::new();
        assert_eq!(execute(cli, &mut out).unwrap(), EXIT_OK);
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.matches("PASS").count(), 4);
        assert!(text.contains("4 cases, 0 failed"));
    }

    #[test]
    fn tune_echoes_config() {
        let cli = Cli::try_parse_from([
            "olsconv", "tune", "--filter-len", "4000", "--candidates", "4096", "--probe-len", "5000", "--repeats", "1",
        ])
        .unwrap();
        let mut out = Vec::new();
        execute(cli, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("# mode=r2r precision=single probe_len=5000"));
        assert!(text.contains("m=4000 chosen=4096"));
    }
}
