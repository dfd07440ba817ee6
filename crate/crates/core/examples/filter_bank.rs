//! A bank of real filters applied to one long real signal, run through every
//! engine variant and checked against the oracle.

use std::time::Instant;

use olsconv::ols::prepare_filters;
use olsconv::oracle::{direct_convolve, max_relative_error};
use olsconv::synth::{random_filters, random_signal};
use olsconv::{Engine, EngineConfig, EngineVariant, Mode, PostProc, SegmentPlan, SegmentSize, ValueKind};

fn main() -> olsconv::Result<()> {
    let (ns, m, nfil) = (200_000, 257, 8);
    let signal = random_signal::<f32>(ns, ValueKind::Real, 1)?;
    let filters = random_filters::<f32>(nfil, m, ValueKind::Real, m / 2, 2)?;
    let engine = Engine::new(EngineConfig::default())?;
    let reference = direct_convolve(&signal, &filters)?;

    for variant in EngineVariant::ALL {
        let plan = SegmentPlan::for_variant(variant, ns, m, Mode::R2r, m / 2, SegmentSize::Auto)?;
        let prepared = prepare_filters(&filters, &plan, variant)?;
        let start = Instant::now();
        let out = engine.convolve(&signal, &prepared, &plan, variant, &PostProc::None)?;
        let elapsed = start.elapsed().as_secs_f64();
        let err = out
            .iter()
            .zip(&reference.outputs)
            .map(|(a, b)| max_relative_error(a, b))
            .fold(0.0, f64::max);
        let n = match variant {
            EngineVariant::Fused | EngineVariant::Pipelined => plan.fft_len().to_string(),
            _ => "-".into(),
        };
        println!(
            "{variant:>18}  N={n:<5} {:8.2} ms  {:7.1} Melem/s  max rel err {err:.2e}",
            elapsed * 1e3,
            (ns * nfil) as f64 / elapsed / 1e6
        );
    }
    Ok(())
}
