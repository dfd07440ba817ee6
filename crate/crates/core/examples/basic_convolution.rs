//! Convolve a short signal with one filter and print the result next to the
//! direct time-domain answer.

use olsconv::ols::transform_filters;
use olsconv::oracle::direct_convolve;
use olsconv::{Engine, EngineVariant, FilterSet, Mode, PostProc, SegmentPlan, SegmentSize, Signal};

fn main() -> olsconv::Result<()> {
    let signal = Signal::real((0..20).map(|i| (i as f64 * 0.7).sin()).collect())?;
    // Three-tap smoother centred on tap 1.
    let filters = FilterSet::real(vec![vec![0.25, 0.5, 0.25]], 1)?;

    let plan = SegmentPlan::new(signal.len(), 3, Mode::R2r, 1, SegmentSize::Fixed(8))?;
    println!(
        "N={} L={} segments={} discarded per segment={}",
        plan.fft_len(),
        plan.valid_len(),
        plan.segment_count(),
        plan.discarded()
    );
    let prepared = transform_filters(&filters, &plan, plan.layout())?;
    let fast = Engine::serial().convolve(&signal, &prepared, &plan, EngineVariant::Fused, &PostProc::None)?;
    let direct = direct_convolve(&signal, &filters)?;

    let (fast, direct) = (fast[0].as_real().unwrap(), direct.outputs[0].as_real().unwrap());
    for (n, (a, b)) in fast.iter().zip(direct).enumerate() {
        println!("{n:3} {a:+.12} {b:+.12}");
    }
    Ok(())
}
