//! Engine-versus-oracle verification over a grid of shapes.

use std::fmt;

use crate::error::Result;
use crate::ols::{prepare_filters, Engine, EngineVariant, Mode, SegmentPlan, SegmentSize};
use crate::oracle::{direct_convolve, max_relative_error};
use crate::postproc::{self, PostProc};
use crate::synth;
use crate::types::{Precision, Real, Samples, ValueKind};

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub ns: Vec<usize>,
    pub m: Vec<usize>,
    pub nfil: Vec<usize>,
    pub modes: Vec<Mode>,
    pub fft_len: SegmentSize,
    pub origin: usize,
    pub variant: EngineVariant,
    pub postproc: PostProc,
    pub precision: Precision,
    pub seed: u64,
    /// Perturbs one output sample of the first case before comparison.
    pub corrupt: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            ns: vec![1_000, 100_000],
            m: vec![3, 64, 257, 1025],
            nfil: vec![1, 8],
            modes: vec![Mode::C2c, Mode::R2r],
            fft_len: SegmentSize::Auto,
            origin: 0,
            variant: EngineVariant::Fused,
            postproc: PostProc::None,
            precision: Precision::Single,
            seed: 0,
            corrupt: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseResult {
    pub mode: Mode,
    pub ns: usize,
    pub m: usize,
    pub nfil: usize,
    pub fft_len: usize,
    /// Largest per-filter relative error; `None` when the case was skipped.
    pub error: Option<f64>,
    pub tolerance: f64,
    pub note: Option<String>,
}

impl CaseResult {
    pub fn passed(&self) -> bool {
        self.error.is_none_or(|e| e <= self.tolerance)
    }
}

impl fmt::Display for CaseResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mode={} ns={} m={} nfil={} n={} ",
            self.mode, self.ns, self.m, self.nfil, self.fft_len
        )?;
        match self.error {
            Some(e) => write!(
                f,
                "max_rel_err={e:.3e} tol={:.0e} {}",
                self.tolerance,
                if self.passed() { "PASS" } else { "FAIL" }
            ),
            None => write!(f, "SKIP ({})", self.note.as_deref().unwrap_or("")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub cases: Vec<CaseResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.cases.iter().all(CaseResult::passed)
    }
}

pub fn run_verify(engine: &Engine, options: &VerifyOptions) -> Result<VerifyReport> {
    match options.precision {
        Precision::Single => run::<f32>(engine, options),
        Precision::Double => run::<f64>(engine, options),
    }
}

fn run<T: Real>(engine: &Engine, options: &VerifyOptions) -> Result<VerifyReport> {
    let tolerance = T::PRECISION.convolution_tolerance();
    let mut report = VerifyReport::default();
    let mut corrupt = options.corrupt;
    for &mode in &options.modes {
        let kind = match mode {
            Mode::C2c => ValueKind::Complex,
            Mode::R2r => ValueKind::Real,
        };
        for &ns in &options.ns {
            let signal = synth::random_signal::<T>(ns, kind, options.seed)?;
            for &m in &options.m {
                for &nfil in &options.nfil {
                    let mut case = CaseResult {
                        mode,
                        ns,
                        m,
                        nfil,
                        fft_len: 0,
                        error: None,
                        tolerance,
                        note: None,
                    };
                    let plan = match SegmentPlan::for_variant(options.variant, ns, m, mode, options.origin, options.fft_len)
                        .and_then(|p| p.geometry(options.postproc.halo()).map(|_| p))
                    {
                        Ok(plan) => plan,
                        Err(e) => {
                            case.note = Some(e.to_string());
                            report.cases.push(case);
                            continue;
                        }
                    };
                    case.fft_len = plan.fft_len();
                    let filters = synth::random_filters::<T>(nfil, m, kind, options.origin, options.seed ^ 1)?;
                    let prepared = prepare_filters(&filters, &plan, options.variant)?;
                    let mut out = engine.convolve(&signal, &prepared, &plan, options.variant, &options.postproc)?;
                    if corrupt {
                        perturb(&mut out[0], ns / 2);
                        corrupt = false;
                    }
                    let reference = direct_convolve(&signal, &filters)?;
                    let mut worst = 0.0f64;
                    for (got, want) in out.iter().zip(&reference.outputs) {
                        let want = postproc::apply_global(want, &options.postproc)?;
                        worst = worst.max(max_relative_error(got, &want));
                    }
                    case.error = Some(worst);
                    report.cases.push(case);
                }
            }
        }
    }
    Ok(report)
}

fn perturb<T: Real>(row: &mut Samples<T>, i: usize) {
    match row {
        Samples::Real(v) => v[i] += T::one(),
        Samples::Complex(v) => v[i].re += T::one(),
    }
}
